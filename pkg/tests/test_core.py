"""Graph, instance, parsing, classification and verification basics."""
import random

import pytest

from bbcolor import (
    BackboneClass,
    BackboneInstance,
    Coloring,
    Graph,
    classify_backbone,
    emit_coloring,
    emit_instance,
    norm_edge,
    parse_coloring,
    parse_instance,
    validate_instance,
    verify_coloring,
)

from conftest import random_instance


def make_inst(n, plain, backbone):
    g = Graph(n)
    for u, v in list(plain) + list(backbone):
        g.add_edge(u, v)
    return BackboneInstance(g, backbone)


# ---------------------------------------------------------------------------
# graph basics
# ---------------------------------------------------------------------------

def test_graph_rejects_bad_edges():
    g = Graph(3)
    with pytest.raises(ValueError):
        g.add_edge(1, 1)
    with pytest.raises(ValueError):
        g.add_edge(0, 2)
    with pytest.raises(ValueError):
        g.add_edge(2, 4)


def test_norm_edge_orders_endpoints():
    assert norm_edge(5, 2) == (2, 5)
    assert norm_edge(2, 5) == (2, 5)


def test_degrees_and_max_degree():
    g = Graph(4)
    g.add_edge(1, 2)
    g.add_edge(1, 3)
    g.add_edge(1, 4)
    assert g.degree(1) == 3
    assert g.degree(4) == 1
    assert g.max_degree == 3


def test_backbone_must_be_subset_of_graph():
    g = Graph(3)
    g.add_edge(1, 2)
    with pytest.raises(ValueError):
        BackboneInstance(g, [(1, 3)])


def test_duplicate_backbone_edge_rejected():
    g = Graph(3)
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    with pytest.raises(ValueError):
        BackboneInstance(g, [(1, 2), (2, 1)])


# ---------------------------------------------------------------------------
# parse / emit round trip
# ---------------------------------------------------------------------------

def test_parse_emit_identity_small():
    inst = make_inst(4, [(2, 3)], [(1, 2), (3, 4)])
    text = emit_instance(inst, comment="round trip")
    back = parse_instance(text)
    assert back == inst
    assert emit_instance(back, comment="round trip") == text


def test_parse_emit_identity_random():
    rng = random.Random(4101)
    for _ in range(50):
        n = rng.randrange(2, 14)
        inst = random_instance(rng, n)
        assert parse_instance(emit_instance(inst)) == inst


def test_parse_rejects_malformed_headers():
    with pytest.raises(ValueError):
        parse_instance("e 1 2\n")  # no header
    with pytest.raises(ValueError):
        parse_instance("p bbc 2 1\n")  # short header
    with pytest.raises(ValueError):
        parse_instance("p bbc 2 1 0\ne 1 2\ne 1 2\n")  # count mismatch
    with pytest.raises(ValueError):
        parse_instance("p bbc 2 0 1\nb 1 3\n")  # vertex out of range
    with pytest.raises(ValueError):
        parse_instance("p bbc 3 1 1\nq 1 2\nb 2 3\n")  # unknown line kind


def test_coloring_parse_emit_round_trip():
    col = Coloring([0, 3, 1, 0, 5])
    text = emit_coloring(col, comment="partial")
    back = parse_coloring(text, 4)
    assert back.colors == col.colors
    with pytest.raises(ValueError):
        parse_coloring("1 2\n5 1\n", 4)  # vertex beyond n


def test_coloring_span_and_indexing():
    col = Coloring([0, 2, 7, 1])
    assert col.span == 7
    assert col[2] == 7
    assert Coloring.empty(3).span == 0
    assert not Coloring.empty(3).assigned()
    assert Coloring([0, 1, 2]).assigned()
    assert Coloring.from_dict(3, {1: 4, 3: 2}).colors == [0, 4, 0, 2]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def test_verify_accepts_valid_and_names_violations():
    inst = make_inst(3, [(2, 3)], [(1, 2)])
    ok = verify_coloring(inst, 3, Coloring([0, 1, 4, 1]))
    assert ok.accepted and ok.reason is None and ok.kind is None

    bad_plain = verify_coloring(inst, 3, Coloring([0, 1, 4, 4]))
    assert not bad_plain.accepted
    assert bad_plain.kind == "plain"
    assert bad_plain.edge == (2, 3)

    bad_gap = verify_coloring(inst, 3, Coloring([0, 2, 4, 1]))
    assert not bad_gap.accepted
    assert bad_gap.kind == "backbone"
    assert bad_gap.edge == (1, 2)

    partial = verify_coloring(inst, 3, Coloring([0, 1, 0, 2]))
    assert not partial.accepted
    assert partial.kind == "uncolored"


def independent_check(inst, lam, col):
    """Two clauses, written separately from verify_coloring: plain edges
    get distinct colors, backbone edges get distance at least lam."""
    if any(col[v] <= 0 for v in range(1, inst.n + 1)):
        return False
    for u, v in inst.graph.edges:
        if col[u] == col[v]:
            return False
    for u, v in inst.backbone:
        if abs(col[u] - col[v]) < lam:
            return False
    return True


def test_verify_matches_independent_two_clause_check():
    rng = random.Random(88421)
    for _ in range(300):
        n = rng.randrange(2, 8)
        inst = random_instance(rng, n)
        col = Coloring([0] + [rng.randrange(0, 6) for _ in range(n)])
        verdict = verify_coloring(inst, 2, col)
        assert verdict.accepted == independent_check(inst, 2, col)


def test_reversal_symmetry():
    # if a coloring is accepted with k colors, so is v -> k + 1 - c(v)
    rng = random.Random(20101)
    hits = 0
    for _ in range(400):
        n = rng.randrange(2, 7)
        inst = random_instance(rng, n)
        lam = rng.choice([2, 3])
        k = rng.randrange(2, 8)
        col = Coloring([0] + [rng.randrange(1, k + 1) for _ in range(n)])
        if verify_coloring(inst, lam, col).accepted:
            hits += 1
            flipped = col.reversed(k)
            assert verify_coloring(inst, lam, flipped).accepted
            assert all(flipped[v] == k + 1 - col[v] for v in range(1, n + 1))
    assert hits >= 20  # sanity: the property was actually exercised


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def is_matching_backbone(inst):
    return all(inst.backbone_degree(v) <= 1 for v in range(1, inst.n + 1))


def is_galaxy_backbone(inst):
    # every backbone component is a star: each edge has an endpoint that
    # carries all of its component's edges
    for u, v in inst.backbone:
        if inst.backbone_degree(u) > 1 and inst.backbone_degree(v) > 1:
            return False
    return True


def is_spanning_tree_backbone(inst):
    if len(inst.backbone) != inst.n - 1:
        return False
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in inst.backbone_adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == inst.n


def is_hamiltonian_path_backbone(inst):
    if not is_spanning_tree_backbone(inst):
        return False
    degs = sorted(inst.backbone_degree(v) for v in range(1, inst.n + 1))
    return degs[0] >= 1 and degs[-1] <= 2 and degs.count(1) == 2


def test_classify_crafted_shapes():
    m = make_inst(4, [(2, 3)], [(1, 2), (3, 4)])
    assert classify_backbone(m).kind == BackboneClass.MATCHING
    assert classify_backbone(m).spanning

    star = make_inst(4, [], [(1, 2), (1, 3), (1, 4)])
    assert classify_backbone(star).kind == BackboneClass.GALAXY

    path = make_inst(4, [(1, 3)], [(1, 2), (2, 3), (3, 4)])
    assert classify_backbone(path).kind == BackboneClass.HAMILTONIAN_PATH

    tree = make_inst(4, [], [(1, 2), (1, 3), (1, 4)])
    # a spanning star is reported as the most specific class: galaxy
    assert classify_backbone(tree).kind == BackboneClass.GALAXY

    spider = make_inst(5, [], [(1, 2), (2, 3), (2, 4), (4, 5)])
    assert classify_backbone(spider).kind == BackboneClass.SPANNING_TREE

    two_stars = make_inst(5, [], [(1, 2), (2, 3), (4, 5)])
    assert classify_backbone(two_stars).kind == BackboneClass.GALAXY

    forest = make_inst(5, [], [(1, 2), (2, 3), (3, 4)])
    got = classify_backbone(forest)
    assert got.kind == BackboneClass.FOREST
    assert not got.spanning

    cyc = make_inst(3, [], [(1, 2), (2, 3), (1, 3)])
    assert classify_backbone(cyc).kind == BackboneClass.GENERIC


def test_classify_monotonicity_random():
    # the most specific class must imply all weaker structural predicates
    rng = random.Random(7707)
    counts = {k: 0 for k in BackboneClass}
    for _ in range(600):
        n = rng.randrange(2, 10)
        inst = random_instance(rng, n)
        got = classify_backbone(inst)
        counts[got.kind] += 1
        if got.kind == BackboneClass.MATCHING:
            assert is_matching_backbone(inst)
            assert is_galaxy_backbone(inst)
        elif got.kind == BackboneClass.GALAXY:
            assert is_galaxy_backbone(inst)
            assert not is_matching_backbone(inst)
        elif got.kind == BackboneClass.HAMILTONIAN_PATH:
            assert is_hamiltonian_path_backbone(inst)
            assert is_spanning_tree_backbone(inst)
        elif got.kind == BackboneClass.SPANNING_TREE:
            assert is_spanning_tree_backbone(inst)
            assert not is_hamiltonian_path_backbone(inst)
            assert not is_galaxy_backbone(inst)
        assert got.spanning == all(
            inst.backbone_degree(v) > 0 for v in range(1, n + 1))
    # the random instances must actually hit several classes
    assert sum(1 for k, c in counts.items() if c > 0) >= 4


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_validate_instance_flags_degree_and_accepts_good():
    good = make_inst(4, [(2, 3)], [(1, 2), (3, 4)])
    rep = validate_instance(good, max_degree=4)
    assert rep.ok and rep.findings == [] and bool(rep)

    g = Graph(6)
    for v in (2, 3, 4, 5, 6):
        g.add_edge(1, v)
    inst = BackboneInstance(g, [(1, 2)])
    rep = validate_instance(inst, max_degree=4)
    assert not rep.ok and not bool(rep)
    assert any("degree" in p for p in rep.findings)
    # without a cap the same instance is fine
    assert validate_instance(inst).ok


def test_validate_instance_reports_isolated_vertices():
    g = Graph(3)
    g.add_edge(1, 2)
    rep = validate_instance(BackboneInstance(g, [(1, 2)]))
    assert not rep.ok
    assert any("isolated" in p for p in rep.findings)
