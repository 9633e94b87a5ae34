"""Exact solver for lambda-backbone k-coloring: decision, optimum search
and complete enumeration.

Domains are color bitmasks (bit c = color c, colors 1..k).  Propagation
maintains arc consistency: a plain edge removes a neighbor's color once a
domain collapses to it, and a backbone edge keeps only colors that still
have a partner at distance >= lambda in the neighbor's domain (computable
from the neighbor's min/max color alone, since the allowed set is the
union of two intervals).

Search is depth-first with minimum-remaining-values variable selection
(ties broken by a static rank: backbone degree, then degree, then index),
ascending color order, a node budget, and a half-range restriction on the
first branched color per component in decision mode (the mirror coloring
v -> k+1-c(v) is always a valid coloring again, so the upper half is
redundant).

Decision search decomposes: whenever assignments disconnect the undecided
region, the pieces are solved independently, and a piece exhausted as
unsatisfiable is remembered by (region, boundary colors) so isomorphic
dead ends are refuted once.  On composite instances (chains of gadgets)
this turns the product of the pieces' search trees into roughly their
sum.  Enumeration keeps the plain depth-first tree: its node counts and
tuple sets are part of frozen expected outputs.
"""

from __future__ import annotations

import os
import sys
import time
from dataclasses import dataclass
from heapq import heappush, heappop
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .core import BackboneInstance, Coloring

# boundary condition: per-vertex allowed color sets, e.g. [(3, {1, 2}), ...]
Boundary = Sequence[Tuple[int, Iterable[int]]]

DEFAULT_NODE_BUDGET = 20_000_000


@dataclass
class SolveStats:
    nodes: int
    elapsed: float
    outcome: str  # "YES" | "NO" | "UNKNOWN"


@dataclass
class EnumerationResult:
    tuples: List[Tuple[int, ...]]  # sorted projected tuples
    count: int  # number of complete colorings


def _budget_or_default(budget: Optional[int]) -> int:
    if budget is not None:
        if budget < 1:
            raise ValueError("node budget must be positive")
        return budget
    raw = os.environ.get("BBC_NODE_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"BBC_NODE_BUDGET is not an integer: {raw!r}") from None
    return DEFAULT_NODE_BUDGET


def _normalize_boundary(boundary: Optional[Boundary], n: int, k: int) -> Dict[int, int]:
    """Validate a boundary condition and turn it into vertex -> bitmask."""
    pins: Dict[int, int] = {}
    if boundary is None:
        return pins
    items = boundary.items() if isinstance(boundary, dict) else boundary
    for v, allowed in items:
        if not (1 <= v <= n):
            raise ValueError(f"boundary vertex {v} out of range 1..{n}")
        if v in pins:
            raise ValueError(f"boundary lists vertex {v} twice")
        colors = set(allowed)
        if not colors:
            raise ValueError(f"boundary for vertex {v} is empty")
        mask = 0
        for c in colors:
            if not (1 <= c <= k):
                raise ValueError(f"boundary color {c} for vertex {v} out of 1..{k}")
            mask |= 1 << c
        pins[v] = mask
    return pins


class _Csp:
    """One solving context: domains, propagation and DFS over components."""

    def __init__(self, inst: BackboneInstance, lam: int, k: int, pins: Dict[int, int]):
        n = inst.n
        self.n = n
        self.lam = lam
        self.k = k
        full = (1 << (k + 1)) - 2  # bits 1..k
        self.full = full
        self.dom: List[int] = [0] + [full] * n
        for v, mask in pins.items():
            self.dom[v] &= mask
        self.plain_nb: List[Tuple[int, ...]] = [()] * (n + 1)
        self.bb_nb: List[Tuple[int, ...]] = [()] * (n + 1)
        plain_sets: List[Set[int]] = [set() for _ in range(n + 1)]
        for u, v in inst.plain_edges:
            plain_sets[u].add(v)
            plain_sets[v].add(u)
        for v in range(1, n + 1):
            self.plain_nb[v] = tuple(sorted(plain_sets[v]))
            self.bb_nb[v] = tuple(sorted(inst.backbone_adj[v]))
        # interval masks: LE[x] = colors 1..x, GE[x] = colors x..k
        self.LE = [0] * (k + 1)
        for x in range(1, k + 1):
            self.LE[x] = (1 << (x + 1)) - 2
        self.GE = [0] * (k + 2)
        for x in range(1, k + 1):
            self.GE[x] = full & ~((1 << x) - 1)
        # static rank: heavier backbone involvement first
        order = sorted(
            range(1, n + 1),
            key=lambda v: (-len(self.bb_nb[v]), -(len(self.bb_nb[v]) + len(self.plain_nb[v])), v),
        )
        self.rank = [0] * (n + 1)
        for i, v in enumerate(order):
            self.rank[v] = i
        self.trail: List[Tuple[int, int]] = []
        self.nodes = 0
        self.failed: Set[Tuple] = set()  # exhausted unsatisfiable regions

    # -- propagation ------------------------------------------------------

    def propagate(self, queue: List[int], heap: Optional[list]) -> bool:
        """Arc-consistency fixpoint from the queued vertices. False = wipeout."""
        dom = self.dom
        trail = self.trail
        plain_nb = self.plain_nb
        bb_nb = self.bb_nb
        LE = self.LE
        GE = self.GE
        lam = self.lam
        k = self.k
        rank = self.rank
        while queue:
            v = queue.pop()
            dv = dom[v]
            if not dv:  # can only happen via an over-constrained boundary pin
                return False
            nbs = bb_nb[v]
            if nbs:
                maxc = dv.bit_length() - 1
                minc = (dv & -dv).bit_length() - 1
                lo = maxc - lam
                hi = minc + lam
                allowed = (LE[lo] if lo >= 1 else 0) | (GE[hi] if hi <= k else 0)
                for u in nbs:
                    du = dom[u]
                    nd = du & allowed
                    if nd != du:
                        if not nd:
                            return False
                        trail.append((u, du))
                        dom[u] = nd
                        if heap is not None and nd & (nd - 1):
                            heappush(heap, (nd.bit_count(), rank[u], u))
                        queue.append(u)
            if not dv & (dv - 1):  # singleton: remove its color at plain neighbors
                for u in plain_nb[v]:
                    du = dom[u]
                    if du & dv:
                        nd = du & ~dv
                        if not nd:
                            return False
                        trail.append((u, du))
                        dom[u] = nd
                        if heap is not None and nd & (nd - 1):
                            heappush(heap, (nd.bit_count(), rank[u], u))
                        queue.append(u)
        return True

    def restore(self, mark: int, heap: Optional[list]) -> None:
        dom = self.dom
        trail = self.trail
        rank = self.rank
        while len(trail) > mark:
            v, old = trail.pop()
            dom[v] = old
            if heap is not None and old & (old - 1):
                heappush(heap, (old.bit_count(), rank[v], v))

    # -- search -----------------------------------------------------------

    def _select(self, heap: list) -> Optional[int]:
        dom = self.dom
        while heap:
            size, _, v = heappop(heap)
            dv = dom[v]
            if dv & (dv - 1) and dv.bit_count() == size:
                return v
        return None

    def _colors_of(self, mask: int) -> List[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def _undecided_components(self, comp: List[int]) -> List[List[int]]:
        """Connected components of the still-undecided vertices of comp,
        smallest first.  Assigned vertices cannot change again, so the
        pieces they separate are independent subproblems."""
        dom = self.dom
        unset = {v for v in comp if dom[v] & (dom[v] - 1)}
        comps: List[List[int]] = []
        seen: Set[int] = set()
        for s in comp:
            if s not in unset or s in seen:
                continue
            seen.add(s)
            cur = [s]
            stack = [s]
            while stack:
                v = stack.pop()
                for u in self.bb_nb[v]:
                    if u in unset and u not in seen:
                        seen.add(u)
                        cur.append(u)
                        stack.append(u)
                for u in self.plain_nb[v]:
                    if u in unset and u not in seen:
                        seen.add(u)
                        cur.append(u)
                        stack.append(u)
            comps.append(cur)
        comps.sort(key=len)
        return comps

    def _region_key(self, comp: List[int]) -> Tuple:
        """Canonical identity of an undecided region: its vertex set plus
        the colors of the assigned vertices it touches.  Two regions with
        equal keys have identical solution sets (domains are the arc-
        consistency fixpoint of exactly these inputs)."""
        dom = self.dom
        boundary = set()
        for v in comp:
            for u in self.bb_nb[v]:
                du = dom[u]
                if not du & (du - 1):
                    boundary.add((u, du))
            for u in self.plain_nb[v]:
                du = dom[u]
                if not du & (du - 1):
                    boundary.add((u, du))
        return (tuple(sorted(comp)), tuple(sorted(boundary)))

    def solve_region(self, comp: List[int], budget: int, symmetry: bool) -> str:
        """Decide one connected undecided region; "YES" leaves it assigned.

        Recursive AND/OR search: branch on the most constrained vertex
        (OR), then decide each disconnected piece independently (AND).
        Regions exhausted as unsatisfiable are cached by _region_key."""
        key = self._region_key(comp)
        if key in self.failed:
            return "NO"
        dom = self.dom
        best = None
        size = 1 << 30
        for v in comp:
            dv = dom[v]
            if dv & (dv - 1):
                b = dv.bit_count()
                if b < size or (b == size and self.rank[v] < self.rank[best]):
                    best, size = v, b
        if best is None:
            return "YES"
        # extreme colors first: they leave the widest remaining band for
        # the neighbors' backbone separation, so they succeed most often
        cands = sorted(self._colors_of(dom[best]),
                       key=lambda c: (min(c - 1, self.k - c), c))
        if symmetry:
            half = (self.k + 1) // 2
            cands = [c for c in cands if c <= half]
        mark = len(self.trail)
        for c in cands:
            self.nodes += 1
            if self.nodes > budget:
                self.restore(mark, None)
                return "UNKNOWN"
            self.trail.append((best, dom[best]))
            dom[best] = 1 << c
            if self.propagate([best], None):
                verdict = "YES"
                for sub in self._undecided_components(comp):
                    res = self.solve_region(sub, budget, False)
                    if res != "YES":
                        verdict = res
                        break
                if verdict == "YES":
                    return "YES"
                if verdict == "UNKNOWN":
                    self.restore(mark, None)
                    return "UNKNOWN"
            self.restore(mark, None)
        if len(self.failed) < 1_000_000:
            self.failed.add(key)
        return "NO"

    def search_component(
        self,
        comp: List[int],
        budget: int,
        symmetry: bool,
        enumerate_mode: bool = False,
        projection: Optional[List[int]] = None,
        sink: Optional[list] = None,
    ) -> str:
        """DFS one component.  Decision mode returns "YES"/"NO"/"UNKNOWN" and,
        on YES, leaves the component's domains assigned.  Enumeration mode
        appends projected tuples to sink (one per complete coloring of the
        component) and returns "DONE"/"UNKNOWN"."""
        dom = self.dom
        heap: list = []
        rank = self.rank
        for v in comp:
            dv = dom[v]
            if dv & (dv - 1):
                heappush(heap, (dv.bit_count(), rank[v], v))
        base_mark = len(self.trail)
        first = self._select(heap)
        if first is None:
            if enumerate_mode:
                sink.append(tuple(dom[v].bit_length() - 1 for v in projection))
                return "DONE"
            return "YES"
        half = (self.k + 1) // 2
        cands = self._colors_of(dom[first])
        if symmetry and not enumerate_mode:
            cands = [c for c in cands if c <= half]
        # frames: [vertex, candidate list, next index, trail mark]
        frames = [[first, cands, 0, len(self.trail)]]
        while frames:
            f = frames[-1]
            self.restore(f[3], heap)
            if f[2] >= len(f[1]):
                frames.pop()
                continue
            c = f[1][f[2]]
            f[2] += 1
            self.nodes += 1
            if self.nodes > budget:
                self.restore(base_mark, heap)
                return "UNKNOWN"
            v = f[0]
            self.trail.append((v, dom[v]))
            dom[v] = 1 << c
            if self.propagate([v], heap):
                nxt = self._select(heap)
                if nxt is None:
                    if enumerate_mode:
                        sink.append(tuple(dom[u].bit_length() - 1 for u in projection))
                        continue  # keep searching siblings
                    return "YES"
                frames.append([nxt, self._colors_of(dom[nxt]), 0, len(self.trail)])
        self.restore(base_mark, heap)
        return "DONE" if enumerate_mode else "NO"


def _components(inst: BackboneInstance) -> List[List[int]]:
    n = inst.n
    seen = [False] * (n + 1)
    comps = []
    for s in range(1, n + 1):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in inst.graph.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def decide_bbc(
    inst: BackboneInstance,
    lam: int,
    k: int,
    boundary: Optional[Boundary] = None,
    budget: Optional[int] = None,
) -> Tuple[Optional[Coloring], SolveStats]:
    """Decide whether a lambda-backbone k-coloring exists.

    Returns (coloring, stats) with outcome "YES" and a verified witness,
    (None, stats) with "NO" when the search space is exhausted, or
    (None, stats) with "UNKNOWN" when the node budget ran out.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    if k < 1:
        raise ValueError("k must be at least 1")
    budget = _budget_or_default(budget)
    pins = _normalize_boundary(boundary, inst.n, k)
    start = time.perf_counter()
    csp = _Csp(inst, lam, k, pins)
    if inst.n == 0:
        return Coloring.empty(0), SolveStats(0, time.perf_counter() - start, "YES")
    # component splits recurse at most once per vertex
    limit = 3 * inst.n + 200
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    if not csp.propagate(list(range(1, inst.n + 1)), None):
        return None, SolveStats(0, time.perf_counter() - start, "NO")
    symmetry = not pins
    outcome = "YES"
    for comp in _components(inst):
        for region in csp._undecided_components(comp):
            res = csp.solve_region(region, budget, symmetry)
            if res != "YES":
                outcome = res
                break
        if outcome != "YES":
            break
    stats = SolveStats(csp.nodes, time.perf_counter() - start, outcome)
    if outcome != "YES":
        return None, stats
    colors = [0] * (inst.n + 1)
    for v in range(1, inst.n + 1):
        colors[v] = csp.dom[v].bit_length() - 1
    return Coloring(colors), stats


def enumerate_colorings(
    inst: BackboneInstance,
    lam: int,
    k: int,
    boundary: Optional[Boundary] = None,
    projection: Optional[Sequence[int]] = None,
    budget: Optional[int] = None,
) -> EnumerationResult:
    """Enumerate every lambda-backbone k-coloring, projected onto the given
    vertices (all vertices when projection is None).

    The tuple list is sorted (deterministic) and count is the exact number
    of complete colorings.  Exhausting the node budget raises RuntimeError:
    a partial enumeration must never look like a complete one.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    if k < 1:
        raise ValueError("k must be at least 1")
    budget = _budget_or_default(budget)
    pins = _normalize_boundary(boundary, inst.n, k)
    if projection is None:
        proj = list(range(1, inst.n + 1))
    else:
        proj = list(projection)
        for v in proj:
            if not (1 <= v <= inst.n):
                raise ValueError(f"projection vertex {v} out of range 1..{inst.n}")
    csp = _Csp(inst, lam, k, pins)
    if inst.n == 0:
        return EnumerationResult([()], 1)
    if not csp.propagate(list(range(1, inst.n + 1)), None):
        return EnumerationResult([], 0)
    # enumeration runs over the whole vertex set at once: counts must be
    # exact, and cross-component products are not worth the bookkeeping at
    # the gadget sizes this is used for.
    sink: List[Tuple[int, ...]] = []
    res = csp.search_component(
        sorted(range(1, inst.n + 1)),
        budget,
        symmetry=False,
        enumerate_mode=True,
        projection=proj,
        sink=sink,
    )
    if res == "UNKNOWN":
        raise RuntimeError(f"enumeration budget ({budget} nodes) exhausted")
    return EnumerationResult(sorted(set(sink)), len(sink))


def bbc_number(
    inst: BackboneInstance,
    lam: int,
    budget: Optional[int] = None,
) -> Tuple[int, Coloring]:
    """Smallest k admitting a lambda-backbone k-coloring, with a witness.

    Tries k upward from the trivial lower bound; every NO below the answer
    is an exhausted search (budget exhaustion raises instead of guessing).
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    lb = 1
    if inst.graph.edges:
        lb = 2
    if inst.backbone:
        lb = max(lb, lam + 1)
    if inst.n == 0:
        return 0, Coloring.empty(0)
    cap = lam * inst.n + inst.n + 2
    for k in range(lb, cap + 1):
        coloring, stats = decide_bbc(inst, lam, k, budget=budget)
        if stats.outcome == "UNKNOWN":
            raise RuntimeError(f"budget exhausted at k={k} while computing the optimum")
        if coloring is not None:
            return k, coloring
    raise RuntimeError("no coloring found below the theoretical cap; instance corrupt?")
