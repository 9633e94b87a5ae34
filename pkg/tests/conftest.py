"""Shared test helpers: independent reference oracles, random instance
generators, and the fixed formula corpora used by the reduction and
acceptance tests.

The oracles here deliberately avoid the package's own search machinery:
``naive_decide`` enumerates all k^n colorings and ``chromatic_number``
is a separate backtracking colorer, so agreement between them and the
package is meaningful evidence.
"""
import itertools
import random
from typing import Dict, List, Optional, Sequence, Tuple

from bbcolor import (
    BackboneInstance,
    CnfFormula,
    Graph,
    reduce_3sat_to_path,
    reduce_3sat_to_tree,
    reduce_nae3sat_to_matching,
    reduce_nae4sat_to_galaxy,
)


# ---------------------------------------------------------------------------
# reference oracles
# ---------------------------------------------------------------------------

def naive_decide(inst: BackboneInstance, lam: int, k: int) -> bool:
    """Generate-and-test over all k^n colorings (small instances only)."""
    plain = [(u - 1, v - 1) for (u, v) in sorted(inst.plain_edges)]
    back = [(u - 1, v - 1) for (u, v) in sorted(inst.backbone)]
    for tup in itertools.product(range(1, k + 1), repeat=inst.n):
        ok = True
        for u, v in plain:
            if tup[u] == tup[v]:
                ok = False
                break
        if ok:
            for u, v in back:
                d = tup[u] - tup[v]
                if -lam < d < lam:
                    ok = False
                    break
        if ok:
            return True
    return False


def naive_count(inst: BackboneInstance, lam: int, k: int) -> int:
    """Number of complete lambda-backbone k-colorings, by enumeration."""
    plain = [(u - 1, v - 1) for (u, v) in sorted(inst.plain_edges)]
    back = [(u - 1, v - 1) for (u, v) in sorted(inst.backbone)]
    total = 0
    for tup in itertools.product(range(1, k + 1), repeat=inst.n):
        ok = all(tup[u] != tup[v] for u, v in plain)
        if ok:
            ok = all(abs(tup[u] - tup[v]) >= lam for u, v in back)
        if ok:
            total += 1
    return total


def proper_colorable(g: Graph, k: int) -> bool:
    """Backtracking k-colorability test with first-new-color symmetry
    breaking; independent of the package's solver."""
    n = g.n
    if n == 0:
        return True
    order = sorted(range(1, n + 1), key=lambda v: -g.degree(v))
    pos = {v: i for i, v in enumerate(order)}
    colors = [0] * (n + 1)

    def go(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        taken = {colors[w] for w in g.adj[v] if pos[w] < i}
        for c in range(1, min(k, used + 1) + 1):
            if c in taken:
                continue
            colors[v] = c
            if go(i + 1, max(used, c)):
                return True
        colors[v] = 0
        return False

    return go(0, 0)


def chromatic_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    for k in range(1, g.n + 1):
        if proper_colorable(g, k):
            return k
    raise AssertionError("unreachable")


def backbone_graph(inst: BackboneInstance) -> Graph:
    h = Graph(inst.n)
    for u, v in inst.backbone:
        h.add_edge(u, v)
    return h


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_instance(rng: random.Random, n: int, max_degree: int = 4,
                    extra: float = 0.8) -> BackboneInstance:
    """Random degree-capped graph with a nonempty random backbone subset.

    The backbone is a random subset of the edges, so it can be any shape
    (matching, forest, cyclic, disconnected); suitable for solver-oracle
    comparisons rather than for the class-specific constructions.
    """
    g = Graph(n)
    edges: List[Tuple[int, int]] = []
    attempts = int(extra * n) + 2
    for _ in range(attempts):
        u = rng.randrange(1, n + 1)
        v = rng.randrange(1, n + 1)
        if u == v or g.has_edge(u, v):
            continue
        if g.degree(u) >= max_degree or g.degree(v) >= max_degree:
            continue
        g.add_edge(u, v)
        edges.append((u, v))
    if not edges:
        u, v = (1, 2) if n >= 2 else (1, 1)
        g.add_edge(u, v)
        edges.append((u, v))
    nb = rng.randrange(1, len(edges) + 1)
    backbone = rng.sample(edges, nb)
    return BackboneInstance(g, backbone)


def has_k4_free_complement(inst: BackboneInstance) -> bool:
    """True when no component of the non-backbone graph is a K4."""
    plain = Graph(inst.n)
    for u, v in inst.plain_edges:
        plain.add_edge(u, v)
    seen = set()
    for s in range(1, inst.n + 1):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        i = 0
        while i < len(comp):
            for w in plain.adj[comp[i]]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
            i += 1
        if len(comp) == 4 and all(plain.degree(v) == 3 for v in comp):
            return False
    return True


# ---------------------------------------------------------------------------
# formula corpora
# ---------------------------------------------------------------------------
# Small formulas keep to at most 4 variables and 4 clauses.  The NAE
# corpora are monotone (positive literals only) as the width-3/width-4
# reductions require.  Expected satisfiability is not hard-coded here;
# tests derive it from brute_force_sat so the corpus stays self-checking.

FANO_NAE3 = CnfFormula(7, (
    (1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6),
    (2, 5, 7), (3, 4, 7), (3, 5, 6),
))

COMPLETE_3CNF = CnfFormula(3, tuple(
    tuple(s * v for s, v in zip(signs, (1, 2, 3)))
    for signs in itertools.product((1, -1), repeat=3)
))

NAE3_SMALL = [CnfFormula(nv, cls) for nv, cls in [
    (3, ((1, 2, 3),)),
    (2, ((1, 1, 2),)),
    (2, ((1, 2, 2),)),
    (1, ((1, 1, 1),)),
    (2, ((2, 2, 2),)),
    (2, ((1, 1, 1), (2, 2, 2))),
    (3, ((1, 2, 3), (1, 1, 1))),
    (4, ((1, 2, 3), (2, 3, 4))),
    (4, ((1, 2, 3), (1, 2, 4), (1, 3, 4))),
    (3, ((1, 1, 2), (2, 2, 3), (3, 3, 1))),
    (4, ((1, 1, 2), (2, 2, 3), (3, 3, 4), (4, 4, 1))),
    (2, ((1, 1, 2), (2, 2, 1))),
    (4, ((1, 2, 3), (2, 3, 4), (3, 4, 1), (4, 1, 2))),
    (4, ((1, 1, 3), (3, 3, 2), (2, 2, 4))),
    (3, ((1, 2, 3), (1, 2, 3), (1, 2, 3))),
    (2, ((1, 1, 2), (1, 2, 2), (2, 2, 1))),
    (4, ((1, 2, 3), (1, 2, 4), (3, 4, 2), (1, 1, 1))),
    (4, ((4, 4, 1), (1, 1, 4))),
    (4, ((1, 2, 3), (2, 2, 4), (3, 3, 4), (1, 1, 4))),
    (4, ((2, 3, 4),)),
    (3, ((1, 1, 2), (2, 2, 3), (3, 3, 1), (1, 2, 3))),
]]

NAE4_SMALL = [CnfFormula(nv, cls) for nv, cls in [
    (4, ((1, 2, 3, 4),)),
    (2, ((1, 1, 2, 2),)),
    (2, ((1, 2, 2, 2),)),
    (2, ((1, 1, 1, 2),)),
    (1, ((1, 1, 1, 1),)),
    (2, ((2, 2, 2, 2),)),
    (2, ((1, 1, 1, 1), (2, 2, 2, 2))),
    (4, ((1, 2, 3, 4), (1, 1, 1, 1))),
    (3, ((1, 1, 2, 2), (2, 2, 3, 3))),
    (4, ((1, 1, 2, 2), (2, 2, 3, 3), (3, 3, 4, 4), (4, 4, 1, 1))),
    (4, ((1, 2, 3, 4), (2, 3, 4, 1))),
    (3, ((3, 3, 3, 3), (1, 2, 3, 3))),
    (3, ((1, 1, 1, 1), (1, 2, 3, 1))),
    (3, ((1, 1, 2, 3),)),
    (4, ((1, 2, 3, 4), (1, 2, 3, 4))),
    (2, ((1, 1, 2, 2), (2, 2, 1, 1))),
    (2, ((1, 1, 1, 2), (1, 1, 1, 2))),
    (4, ((1, 2, 3, 4), (4, 3, 2, 1), (1, 3, 2, 4))),
    (4, ((1, 1, 2, 2), (3, 3, 4, 4))),
    (2, ((2, 2, 2, 2), (1, 1, 2, 2))),
]]

SAT3_SMALL = [CnfFormula(nv, cls) for nv, cls in [
    (3, ((1, 2, 3),)),
    (3, ((-1, -2, -3),)),
    (3, ((1, -2, 3),)),
    (3, ((1, 2, 3), (-1, -2, -3))),
    (3, ((1, 2, 3), (-1, 2, 3), (1, -2, 3), (1, 2, -3))),
    (1, ((1, 1, 1),)),
    (2, ((1, 1, 2),)),
    (2, ((1, -1, 2),)),
    (1, ((-1, -1, -1),)),
    (3, ((1, 2, 2), (-2, 3, 3))),
    (4, ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))),
    (3, ((-1, 2, 3), (1, -2, 3), (1, 2, -3))),
    (3, ((1, 2, 3), (-1, -2, 3), (1, 2, -3))),
    (3, ((1,), (2,), (-3,))),
    (3, ((1, 2), (-1, 3))),
    (4, ((4, 4, 4), (1, 2, 3))),
    (4, ((-4, 1, 1), (4, 2, 2))),
    (3, ((1, 2, 3), (-1, 2, 3), (-2, 3, 3), (-3, 1, 1))),
    (4, ((2, 3, 4), (-2, -3, -4), (2, -3, 4))),
    (3, ((1, 2, 3), (1, 2, 3), (1, 2, 3), (-1, -2, -3))),
]]

UNSAT_X3 = CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))

REDUCERS = {
    "matching": reduce_nae3sat_to_matching,
    "galaxy": reduce_nae4sat_to_galaxy,
    "path": reduce_3sat_to_path,
    "tree": reduce_3sat_to_tree,
}

# smallest lambda each reduction accepts (the decision problem is hard
# from that lambda on)
MIN_LAMBDA = {"matching": 2, "galaxy": 3, "path": 3, "tree": 4}

# k-offset above lambda targeted by each reduction
K_OFFSET = {"matching": 2, "galaxy": 3, "path": 3, "tree": 4}

NAE_MODE = {"matching": True, "galaxy": True, "path": False, "tree": False}


def corpus_for(mode: str) -> List[CnfFormula]:
    if mode == "matching":
        return NAE3_SMALL + [FANO_NAE3]
    if mode == "galaxy":
        return list(NAE4_SMALL)
    if mode == "path":
        return SAT3_SMALL + [COMPLETE_3CNF]
    if mode == "tree":
        return list(SAT3_SMALL)
    raise ValueError(mode)


def is_large_no(mode: str, formula: CnfFormula) -> bool:
    """The two corpus members whose refutations are deliberately slow."""
    return ((mode == "matching" and formula is FANO_NAE3)
            or (mode == "path" and formula is COMPLETE_3CNF))
