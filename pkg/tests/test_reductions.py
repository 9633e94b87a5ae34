"""CNF handling, normalization, the four reductions, and witness decoding."""
import random

import pytest

from bbcolor import (
    BackboneClass,
    CnfFormula,
    ReductionCertificate,
    assignment_to_coloring,
    brute_force_sat,
    classify_backbone,
    decide_bbc,
    extract_assignment,
    normalize_3sat,
    parse_cnf,
    reduce_3sat_to_path,
    reduce_3sat_to_tree,
    reduce_nae3sat_to_matching,
    reduce_nae4sat_to_galaxy,
    validate_instance,
    verify_coloring,
)

from conftest import MIN_LAMBDA, NAE_MODE, REDUCERS


# ---------------------------------------------------------------------------
# CNF parsing and satisfiability
# ---------------------------------------------------------------------------

def test_parse_cnf_dimacs():
    f = parse_cnf("c a comment\np cnf 3 2\n1 -2 3 0\n2 3 0\n")
    assert f.num_vars == 3
    assert f.clauses == ((1, -2, 3), (2, 3))


def test_parse_cnf_multiline_and_str_round_trip():
    f = CnfFormula(4, ((1, 2, 3), (-4, 2, 1)))
    assert parse_cnf(str(f)) == f
    # clauses may span lines until the closing zero
    g = parse_cnf("p cnf 2 1\n1\n-2 0\n")
    assert g.clauses == ((1, -2),)


def test_parse_cnf_rejects_garbage():
    with pytest.raises(ValueError):
        parse_cnf("1 2 0\n")  # missing header
    with pytest.raises(ValueError):
        parse_cnf("p cnf 2 1\n1 3 0\n")  # literal out of range
    with pytest.raises(ValueError):
        parse_cnf("p cnf 2 2\n1 2 0\n")  # clause count mismatch
    with pytest.raises(ValueError):
        parse_cnf("p dnf 2 1\n1 2 0\n")
    with pytest.raises(ValueError):
        parse_cnf("p cnf 2 1\n1 x 0\n")  # non-numeric literal
    with pytest.raises(ValueError):
        parse_cnf("p cnf 2 1\n0\n")  # empty clause
    # a final clause may omit its terminating zero
    assert parse_cnf("p cnf 2 1\n1 2\n").clauses == ((1, 2),)


def test_formula_validation():
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, 0, 2),))
    with pytest.raises(ValueError):
        CnfFormula(2, ((1, 3),))
    with pytest.raises(ValueError):
        CnfFormula(-1, ())


def test_brute_force_sat_plain_and_nae():
    assert brute_force_sat(CnfFormula(2, ((1,), (-1,)))) is None
    phi = brute_force_sat(CnfFormula(2, ((1, 2), (-1, 2))))
    assert phi is not None and phi[2] is True
    # not-all-equal mode: an all-same clause is never satisfied
    assert brute_force_sat(CnfFormula(1, ((1, 1, 1),)), nae=True) is None
    phi = brute_force_sat(CnfFormula(2, ((1, 1, 2),)), nae=True)
    assert phi is not None and phi[1] != phi[2]


# ---------------------------------------------------------------------------
# 3-SAT normalization
# ---------------------------------------------------------------------------

def random_small_cnf(rng):
    nv = rng.randrange(1, 5)
    clauses = []
    for _ in range(rng.randrange(1, 5)):
        width = rng.randrange(1, 4)
        clauses.append(tuple(rng.choice([1, -1]) * rng.randrange(1, nv + 1)
                             for _ in range(width)))
    return CnfFormula(nv, tuple(clauses))


def test_normalize_3sat_properties():
    rng = random.Random(2024)
    for _ in range(120):
        f = random_small_cnf(rng)
        norm, flipped = normalize_3sat(f)
        for cl in norm.clauses:
            assert len(cl) == 3
            assert len({abs(l) for l in cl}) == 3
        for v in range(1, norm.num_vars + 1):
            occurs = any(abs(l) == v for cl in norm.clauses for l in cl)
            positive = any(l == v for cl in norm.clauses for l in cl)
            assert positive or not occurs
        assert set(flipped) <= set(range(1, norm.num_vars + 1))
        # equisatisfiable with the original
        assert (brute_force_sat(f) is None) == (brute_force_sat(norm) is None)


def test_normalize_3sat_edge_cases():
    norm, _ = normalize_3sat(CnfFormula(2, ((1, -1, 2),)))
    assert norm.clauses == ()  # tautologies vanish
    norm, flipped = normalize_3sat(CnfFormula(1, ((-1, -1, -1),)))
    assert 1 in flipped  # negated-only variables get flipped positive
    assert brute_force_sat(norm) is not None
    with pytest.raises(ValueError):
        normalize_3sat(CnfFormula(4, ((1, 2, 3, 4),)))


# ---------------------------------------------------------------------------
# structural properties of the four reductions
# ---------------------------------------------------------------------------

TARGET_CLASS = {
    "matching": BackboneClass.MATCHING,
    "galaxy": BackboneClass.GALAXY,
    "path": BackboneClass.HAMILTONIAN_PATH,
    "tree": BackboneClass.SPANNING_TREE,
}

STRUCTURE_CASES = [
    ("matching", CnfFormula(3, ((1, 2, 3), (2, 3, 1)))),
    ("matching", CnfFormula(2, ((1, 1, 2),))),
    ("galaxy", CnfFormula(4, ((1, 2, 3, 4),))),
    ("galaxy", CnfFormula(2, ((1, 1, 2, 2), (2, 2, 1, 1)))),
    ("path", CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))),
    ("path", CnfFormula(2, ((1, 1, 2),))),
    ("tree", CnfFormula(3, ((1, 2, 3),))),
]


def test_reduced_instances_are_structurally_sound():
    for mode, f in STRUCTURE_CASES:
        lam = MIN_LAMBDA[mode]
        red = REDUCERS[mode](f, lam)
        inst = red.instance
        assert validate_instance(inst, max_degree=4).ok, mode
        got = classify_backbone(inst)
        assert got.kind == TARGET_CLASS[mode], mode
        assert got.spanning
        cert = red.certificate
        assert cert.target == mode
        assert cert.lam == lam
        assert cert.k == lam + {"matching": 2, "galaxy": 3,
                                "path": 3, "tree": 4}[mode]
        assert cert.size == inst.n
        # probes cover every encoded variable (3-SAT normalization may add
        # fresh ones past the original num_vars)
        assert set(cert.probes) == set(range(1, red.formula.num_vars + 1))
        assert cert.num_vars == f.num_vars
        for probe in cert.probes.values():
            assert 1 <= probe <= inst.n


def test_known_sizes_pinned():
    assert reduce_nae3sat_to_matching(
        CnfFormula(1, ((1, 1, 1),)), 2).instance.n == 90
    assert reduce_nae4sat_to_galaxy(
        CnfFormula(1, ((1, 1, 1, 1),)), 3).instance.n == 132
    assert reduce_3sat_to_path(
        CnfFormula(3, ((1, 2, 3),)), 3).instance.n == 56
    assert reduce_3sat_to_tree(
        CnfFormula(3, ((1, 2, 3),)), 4).instance.n == 1394


def test_size_grows_linearly_with_clauses():
    pools = {
        "matching": (3, ((1, 2, 3), (2, 3, 4), (3, 4, 1), (4, 1, 2))),
        "galaxy": (4, ((1, 2, 3, 4), (2, 3, 4, 1), (3, 4, 1, 2), (4, 1, 2, 3))),
        "path": (3, ((1, 2, 3), (-1, 2, 3), (1, -2, 3), (1, 2, -3))),
        "tree": (3, ((1, 2, 3), (-1, 2, 3), (1, -2, 3), (1, 2, -3))),
    }
    for mode, (width, pool) in pools.items():
        lam = MIN_LAMBDA[mode]
        sizes = []
        for m in (1, 2, 3, 4):
            f = CnfFormula(4 if mode in ("matching", "galaxy") else 3,
                           pool[:m])
            sizes.append(REDUCERS[mode](f, lam).instance.n)
        # per-clause cost settles to a constant (the first step may differ
        # while shared scaffolding is still being amortized)
        assert sizes[3] - sizes[2] == sizes[2] - sizes[1] > 0, (mode, sizes)
        assert sizes[0] < sizes[1] < sizes[2] < sizes[3]


def test_lambda_range_enforced():
    with pytest.raises(ValueError):
        reduce_nae3sat_to_matching(CnfFormula(3, ((1, 2, 3),)), 1)
    with pytest.raises(ValueError):
        reduce_nae4sat_to_galaxy(CnfFormula(4, ((1, 2, 3, 4),)), 2)
    with pytest.raises(ValueError):
        reduce_3sat_to_path(CnfFormula(3, ((1, 2, 3),)), 2)
    with pytest.raises(ValueError):
        reduce_3sat_to_tree(CnfFormula(3, ((1, 2, 3),)), 3)


def test_nae_reducers_require_monotone_exact_width():
    with pytest.raises(ValueError):
        reduce_nae3sat_to_matching(CnfFormula(3, ((1, -2, 3),)), 2)
    with pytest.raises(ValueError):
        reduce_nae3sat_to_matching(CnfFormula(2, ((1, 2),)), 2)
    with pytest.raises(ValueError):
        reduce_nae4sat_to_galaxy(CnfFormula(3, ((1, 2, 3),)), 3)
    with pytest.raises(ValueError):
        reduce_nae4sat_to_galaxy(CnfFormula(4, ((1, 2, -3, 4),)), 3)


# ---------------------------------------------------------------------------
# certificates and witness decoding
# ---------------------------------------------------------------------------

def test_certificate_json_round_trip():
    for mode, f in STRUCTURE_CASES[:4]:
        cert = REDUCERS[mode](f, MIN_LAMBDA[mode]).certificate
        again = ReductionCertificate.from_json(cert.to_json())
        assert again == cert


WITNESS_CASES = [
    ("matching", CnfFormula(3, ((1, 2, 3),))),
    ("matching", CnfFormula(2, ((1, 1, 2), (2, 2, 1)))),
    ("galaxy", CnfFormula(4, ((1, 2, 3, 4),))),
    ("galaxy", CnfFormula(2, ((1, 1, 2, 2),))),
    ("path", CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))),
    ("path", CnfFormula(1, ((1, 1, 1),))),
    ("tree", CnfFormula(3, ((1, 2, 3),))),
]


def test_assignment_completes_to_verified_coloring():
    for mode, f in WITNESS_CASES:
        nae = NAE_MODE[mode]
        phi = brute_force_sat(f, nae=nae)
        assert phi is not None
        for lam in (MIN_LAMBDA[mode], MIN_LAMBDA[mode] + 1):
            red = REDUCERS[mode](f, lam)
            col = assignment_to_coloring(red, phi)
            assert verify_coloring(red.instance, lam, col).accepted
            assert col.span <= red.certificate.k
            # decoding the completed coloring recovers the assignment
            back = extract_assignment(red.certificate, col)
            assert back == phi
            # the mirrored coloring decodes to a satisfying assignment too
            mirrored = extract_assignment(
                red.certificate, col.reversed(red.certificate.k))
            ok = all(
                (any(mirrored[abs(l)] == (l > 0) for l in cl)
                 and (not nae or not all(mirrored[abs(l)] == (l > 0)
                                         for l in cl)))
                for cl in f.clauses)
            assert ok, (mode, mirrored)


def test_solver_witness_decodes_to_satisfying_assignment():
    for mode, f in WITNESS_CASES[:5]:
        lam = MIN_LAMBDA[mode]
        red = REDUCERS[mode](f, lam)
        col, stats = decide_bbc(red.instance, lam, red.certificate.k,
                                budget=2_000_000)
        assert stats.outcome == "YES"
        phi = extract_assignment(red.certificate, col)
        nae = NAE_MODE[mode]
        for cl in f.clauses:
            vals = [phi[abs(l)] == (l > 0) for l in cl]
            assert any(vals)
            if nae:
                assert not all(vals)


def test_unsatisfying_assignment_rejected():
    f = CnfFormula(1, ((1, 1, 1),))
    red = reduce_3sat_to_path(f, 3)
    with pytest.raises(ValueError):
        assignment_to_coloring(red, {1: False})
    nae = CnfFormula(3, ((1, 2, 3),))
    red = reduce_nae3sat_to_matching(nae, 2)
    with pytest.raises(ValueError):
        assignment_to_coloring(red, {1: True, 2: True, 3: True})
