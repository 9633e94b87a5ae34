"""Exact solver: oracle agreement, monotonicity, witnesses, budgets,
boundaries and exhaustive enumeration."""
import os
import random

import pytest

from bbcolor import (
    BackboneInstance,
    Graph,
    bbc_number,
    decide_bbc,
    enumerate_colorings,
    verify_coloring,
)

from conftest import (
    backbone_graph,
    chromatic_number,
    naive_count,
    naive_decide,
    random_instance,
)


def small_suite(seed, count, nmax):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randrange(2, nmax + 1)
        out.append((random_instance(rng, n), rng.choice([2, 3]),
                    rng.randrange(2, 7)))
    return out


def test_agrees_with_naive_enumeration():
    for inst, lam, k in small_suite(1311, 60, 6):
        col, stats = decide_bbc(inst, lam, k)
        assert stats.outcome in ("YES", "NO")
        assert (stats.outcome == "YES") == naive_decide(inst, lam, k)
        if col is not None:
            v = verify_coloring(inst, lam, col)
            assert v.accepted and col.span <= k


def test_yes_no_monotone_in_k():
    for inst, lam, k in small_suite(2322, 40, 6):
        _, stats = decide_bbc(inst, lam, k)
        if stats.outcome == "YES":
            _, up = decide_bbc(inst, lam, k + 1)
            assert up.outcome == "YES"
        else:
            if k > 1:
                _, down = decide_bbc(inst, lam, k - 1)
                assert down.outcome == "NO"


def test_witness_always_verifies():
    rng = random.Random(3399)
    yeses = 0
    for _ in range(60):
        inst = random_instance(rng, rng.randrange(2, 9))
        lam = rng.choice([2, 3])
        k = rng.randrange(3, 9)
        col, stats = decide_bbc(inst, lam, k)
        if stats.outcome == "YES":
            yeses += 1
            assert col is not None
            assert verify_coloring(inst, lam, col).accepted
            assert col.span <= k
        else:
            assert col is None
    assert yeses >= 15


def test_bbc_number_is_minimal_and_witnessed():
    rng = random.Random(515)
    for _ in range(25):
        inst = random_instance(rng, rng.randrange(2, 7))
        lam = rng.choice([2, 3])
        k, col = bbc_number(inst, lam)
        assert verify_coloring(inst, lam, col).accepted
        assert col.span <= k
        assert naive_decide(inst, lam, k)
        assert not naive_decide(inst, lam, k - 1)


def test_bound_sandwich_small():
    rng = random.Random(6006)
    for _ in range(20):
        inst = random_instance(rng, rng.randrange(3, 9))
        lam = rng.choice([2, 3])
        chi_g = chromatic_number(inst.graph)
        chi_h = chromatic_number(backbone_graph(inst))
        k, _ = bbc_number(inst, lam)
        assert chi_g <= k <= lam * (chi_g - 1) + 1
        assert k >= lam * (chi_h - 1) + 1
        assert k <= (lam + chi_g - 2) * chi_h - lam + 2


def hard_instance():
    # K4 plus a pendant with a backbone path through everything
    g = Graph(5)
    for u in range(1, 5):
        for v in range(u + 1, 5):
            g.add_edge(u, v)
    g.add_edge(4, 5)
    return BackboneInstance(g, [(1, 2), (2, 3), (3, 4), (4, 5)])


def test_budget_exhaustion_reports_unknown():
    inst = hard_instance()
    col, stats = decide_bbc(inst, 4, 13, budget=3)
    assert stats.outcome == "UNKNOWN"
    assert col is None
    assert stats.nodes >= 3

    big = random_instance(random.Random(0), 12)
    with pytest.raises(RuntimeError, match="budget exhausted"):
        bbc_number(big, 3, budget=2)


def test_env_budget_is_picked_up(monkeypatch):
    monkeypatch.setenv("BBC_NODE_BUDGET", "3")
    _, stats = decide_bbc(hard_instance(), 4, 13)
    assert stats.outcome == "UNKNOWN"
    monkeypatch.setenv("BBC_NODE_BUDGET", "not a number")
    with pytest.raises(ValueError):
        decide_bbc(hard_instance(), 4, 13)


def test_stats_fields_populated():
    inst = hard_instance()
    col, stats = decide_bbc(inst, 2, 6)
    assert stats.outcome == "YES"
    assert stats.nodes > 0
    assert stats.elapsed >= 0.0


def test_boundary_pins_are_respected():
    g = Graph(3)
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    inst = BackboneInstance(g, [(1, 2)])
    col, stats = decide_bbc(inst, 2, 4, boundary=[(1, [4]), (3, [1, 2])])
    assert stats.outcome == "YES"
    assert col[1] == 4 and col[3] in (1, 2)
    # pinning both backbone endpoints too close together forces NO
    _, stats = decide_bbc(inst, 2, 4, boundary=[(1, [2]), (2, [3])])
    assert stats.outcome == "NO"


def test_boundary_validation_errors():
    g = Graph(2)
    g.add_edge(1, 2)
    inst = BackboneInstance(g, [(1, 2)])
    with pytest.raises(ValueError):
        decide_bbc(inst, 2, 3, boundary=[(5, [1])])
    with pytest.raises(ValueError):
        decide_bbc(inst, 2, 3, boundary=[(1, [])])
    with pytest.raises(ValueError):
        decide_bbc(inst, 2, 3, boundary=[(1, [9])])
    with pytest.raises(ValueError):
        decide_bbc(inst, 2, 3, boundary=[(1, [1]), (1, [2])])


def test_enumeration_matches_naive_count():
    rng = random.Random(777)
    for _ in range(30):
        inst = random_instance(rng, rng.randrange(2, 6))
        lam = 2
        k = rng.randrange(2, 6)
        res = enumerate_colorings(inst, lam, k)
        assert res.count == naive_count(inst, lam, k)
        assert res.tuples == sorted(res.tuples)
        assert len(res.tuples) == res.count  # full projection: all distinct


def test_enumeration_projection_and_budget():
    g = Graph(4)
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    g.add_edge(3, 4)
    inst = BackboneInstance(g, [(2, 3)])
    res = enumerate_colorings(inst, 2, 3, projection=[2, 3])
    # projected tuples obey the backbone gap and are deduplicated
    assert all(abs(a - b) >= 2 for a, b in res.tuples)
    assert len(set(res.tuples)) == len(res.tuples)
    assert res.count == naive_count(inst, 2, 3)

    with pytest.raises(RuntimeError, match="budget"):
        enumerate_colorings(inst, 2, 3, budget=2)


def test_enumeration_respects_boundary():
    g = Graph(2)
    g.add_edge(1, 2)
    inst = BackboneInstance(g, [(1, 2)])
    res = enumerate_colorings(inst, 2, 4, boundary=[(1, [1])],
                              projection=[1, 2])
    assert res.tuples == [(1, 3), (1, 4)]
