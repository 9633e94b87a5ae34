"""Polynomial-time constructions of lambda-backbone colorings for the
backbone classes where good bounds hold on max-degree-4 graphs.

Entry points and their guarantees (all colorings are verified-by-tests,
the spans quoted are the palette sizes the constructions draw from):

    greedy_degenerate_bbc2   forest backbone, lambda=2, span <= maxdeg+2
    lift_two_to_lambda       maps a 2-backbone coloring with colors <= 6
                             into a lambda-backbone coloring, span <= 2*lambda+2
    matching_lambda_plus_3   perfect-matching backbone, lambda >= 3, span <= lambda+3
    galaxy_lambda_plus_4     spanning-galaxy backbone, lambda >= 3, span <= lambda+4
    path_lambda_plus_4       Hamiltonian-path backbone, lambda >= 2, span <= lambda+4
    tree_k4free_lambda_plus_5  spanning-tree backbone whose non-backbone
                             graph has no K4 component, span <= lambda+5
    best_constructive        dispatch on the backbone class, returns the
                             coloring plus a bound label like "λ+3=8"

The path construction follows the split into odd positions A (low colors
{1,2,3}) and even positions B (high colors {λ+2..λ+4}): backbone edges
always straddle the two bands, and the only dangerous pair (3, λ+2) is
avoided by choosing the vertices that receive 3/λ+2 as one independent
color class of a 3-coloring of a cycle-plus-triangles graph built from
the odd cycles of the non-backbone remainder.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .core import (
    BackboneClass,
    BackboneInstance,
    Coloring,
    Graph,
    classify_backbone,
    norm_edge,
    verify_coloring,
)
from .solver import decide_bbc


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _graph_components(adj: Sequence[Set[int]], vertices: Sequence[int]) -> List[List[int]]:
    seen: Set[int] = set()
    comps = []
    vset = set(vertices)
    for s in sorted(vertices):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w in vset and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _induced_instance(inst: BackboneInstance, verts: Sequence[int]
                      ) -> Tuple[BackboneInstance, Dict[int, int]]:
    """Subinstance on the given vertices; returns it plus old->new map."""
    order = sorted(verts)
    old2new = {v: i + 1 for i, v in enumerate(order)}
    g = Graph(len(order))
    backbone = []
    for u, v in sorted(inst.graph.edges):
        if u in old2new and v in old2new:
            g.add_edge(old2new[u], old2new[v])
            if (u, v) in inst.backbone:
                backbone.append((old2new[u], old2new[v]))
    return BackboneInstance(g, backbone), old2new


def _induced_graph(g: Graph, verts: Sequence[int]) -> Tuple[Graph, List[int]]:
    """Subgraph on the given vertices; returns it plus new->old list."""
    order = sorted(verts)
    old2new = {v: i + 1 for i, v in enumerate(order)}
    sub = Graph(len(order))
    for u, v in sorted(g.edges):
        if u in old2new and v in old2new:
            sub.add_edge(old2new[u], old2new[v])
    return sub, order


# ---------------------------------------------------------------------------
# lift: 2-backbone coloring -> lambda-backbone coloring
# ---------------------------------------------------------------------------

def lift_two_to_lambda(coloring: Coloring, lam: int) -> Coloring:
    """Stretch a 2-backbone coloring with colors in 1..6 to gap lambda.

    Color c maps to (lambda-2)*floor((c-1)/2) + c: pairs {1,2}, {3,4},
    {5,6} keep their internal distance while consecutive pairs move
    lambda-2 further apart, so plain edges stay proper and every gap of
    at least 2 becomes a gap of at least lambda.  At lambda=2 this is the
    identity.  Input spans of 5 and 6 give output spans 2*lambda+1 and
    2*lambda+2.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    out = [0] * (coloring.n + 1)
    for v in range(1, coloring.n + 1):
        c = coloring.colors[v]
        if c <= 0:
            raise ValueError(f"vertex {v} is uncolored")
        if c > 6:
            raise ValueError(f"vertex {v} has color {c} > 6; cannot lift")
        out[v] = (lam - 2) * ((c - 1) // 2) + c
    return Coloring(out)


# ---------------------------------------------------------------------------
# greedy 2-backbone coloring for forest backbones
# ---------------------------------------------------------------------------

def greedy_degenerate_bbc2(inst: BackboneInstance,
                           budget: Optional[int] = None) -> Coloring:
    """2-backbone coloring of an instance with a forest backbone using
    colors 1..maxdeg(G)+2.

    Backbone trees are traversed from a root of maximum graph degree;
    each vertex takes the smallest color that is proper with respect to
    its already-colored neighbors and at distance >= 2 from its backbone
    parent.  If a vertex runs out of colors, the parent is recolored to
    the largest color it can still take and the vertex retried; if that
    fails too, the vertex's whole graph component is re-solved exactly at
    the same palette size.
    """
    cls = classify_backbone(inst)
    if cls.kind == BackboneClass.GENERIC:
        raise ValueError("backbone contains a cycle; need a forest backbone")
    n = inst.n
    colors = [0] * (n + 1)
    maxdeg = inst.graph.max_degree
    if maxdeg == 0:
        for v in range(1, n + 1):
            colors[v] = 1
        return Coloring(colors)
    k = maxdeg + 2

    parent: Dict[int, int] = {}
    order: List[int] = []
    trees = _graph_components(inst.backbone_adj, range(1, n + 1))
    roots = []
    for tree in trees:
        root = max(tree, key=lambda v: (inst.graph.degree(v), -v))
        roots.append((root, tree))
    roots.sort()
    for root, _tree in roots:
        parent[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in sorted(inst.backbone_adj[v]):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)

    def feasible(v: int, exclude_child: int = 0) -> List[int]:
        banned: Set[int] = set()
        for w in inst.graph.adj[v]:
            if colors[w]:
                banned.add(colors[w])
        opts = []
        p = parent.get(v, 0)
        pc = colors[p] if p else 0
        kids = [w for w in inst.backbone_adj[v]
                if parent.get(w) == v and colors[w] and w != exclude_child]
        for c in range(1, k + 1):
            if c in banned:
                continue
            if pc and abs(c - pc) < 2:
                continue
            if any(abs(c - colors[w]) < 2 for w in kids):
                continue
            opts.append(c)
        return opts

    failed_comps: Set[int] = set()
    comp_of: Dict[int, int] = {}
    for i, comp in enumerate(_graph_components(inst.graph.adj, range(1, n + 1))):
        for v in comp:
            comp_of[v] = i
    comps = _graph_components(inst.graph.adj, range(1, n + 1))

    for v in order:
        if comp_of[v] in failed_comps:
            continue
        opts = feasible(v)
        if not opts:
            p = parent.get(v, 0)
            if p:
                repick = feasible(p, exclude_child=v)
                if repick:
                    colors[p] = max(repick)
                    opts = feasible(v)
        if opts:
            colors[v] = opts[0]
        else:
            failed_comps.add(comp_of[v])

    for ci in sorted(failed_comps):
        comp = comps[ci]
        sub, old2new = _induced_instance(inst, comp)
        witness, stats = decide_bbc(sub, 2, k, budget=budget)
        if witness is None:
            raise RuntimeError(
                f"no 2-backbone {k}-coloring found on a component "
                f"({stats.outcome}); bound breached")
        for v in comp:
            colors[v] = witness.colors[old2new[v]]
    return Coloring(colors)


# ---------------------------------------------------------------------------
# Brooks-style proper coloring
# ---------------------------------------------------------------------------

def _bfs_order(g: Graph, verts: Sequence[int], root: int) -> List[int]:
    vset = set(verts)
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(g.adj[v]):
            if w in vset and w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def _greedy_reverse_bfs(g: Graph, verts: Sequence[int], root: int,
                        colors: List[int], limit: int,
                        pre: Dict[int, int] = {}) -> None:
    """Color `verts` greedily in reverse BFS order from root (root last).

    Every non-root vertex has an uncolored neighbor when its turn comes,
    so limit colors suffice whenever limit >= deg; `pre` pins colors."""
    order = _bfs_order(g, verts, root)
    vset = set(verts)
    for v, c in pre.items():
        colors[v] = c
    for v in reversed(order):
        if colors[v]:
            continue
        banned = {colors[w] for w in g.adj[v] if w in vset and colors[w]}
        for c in range(1, limit + 1):
            if c not in banned:
                colors[v] = c
                break
        else:
            raise RuntimeError("greedy ran out of colors; ordering invariant broken")


def _cycle_order(g: Graph, comp: List[int]) -> List[int]:
    start = comp[0]
    order = [start]
    prev = 0
    cur = start
    while True:
        nxts = [w for w in sorted(g.adj[cur]) if w != prev and w in set(comp)]
        nxt = nxts[0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def brooks_proper_coloring(g: Graph) -> Tuple[Coloring, Optional[str]]:
    """Proper coloring of a connected graph with at most max(Delta, 3)
    colors, and at most Delta colors when Delta >= 3 unless the graph is
    complete or an odd cycle.

    Returns (coloring, tag) with tag "Clique" for complete graphs
    (n colors), "OddCycle" for odd cycles (3 colors), None otherwise.
    """
    n = g.n
    if n == 0:
        return Coloring.empty(0), None
    comps = _graph_components(g.adj, range(1, n + 1))
    if len(comps) > 1:
        raise ValueError("graph is disconnected")
    m = len(g.edges)
    colors = [0] * (n + 1)
    if m == n * (n - 1) // 2:
        for v in range(1, n + 1):
            colors[v] = v
        return Coloring(colors), "Clique"
    delta = g.max_degree
    if delta <= 2:
        if m == n and n % 2 == 1:  # connected 2-regular odd: odd cycle
            order = _cycle_order(g, comps[0])
            for i, v in enumerate(order):
                colors[v] = 1 + (i % 2)
            colors[order[-1]] = 3
            return Coloring(colors), "OddCycle"
        # path or even cycle: 2-color by BFS parity
        root = comps[0][0]
        dist = {root: 0}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(g.adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        for v in range(1, n + 1):
            colors[v] = 1 + dist[v] % 2
        return Coloring(colors), None

    verts = list(range(1, n + 1))
    irregular = [v for v in verts if g.degree(v) < delta]
    if irregular:
        _greedy_reverse_bfs(g, verts, min(irregular), colors, delta)
        return Coloring(colors), None

    # delta-regular: look for a cut vertex first
    cut = None
    for v in verts:
        rest = [u for u in verts if u != v]
        if rest and len(_graph_components(g.adj, rest)) > 1:
            cut = v
            break
    if cut is not None:
        parts = _graph_components(g.adj, [u for u in verts if u != cut])
        for part in parts:
            sub = part + [cut]
            tmp = [0] * (n + 1)
            _greedy_reverse_bfs(g, sub, cut, tmp, delta)
            if tmp[cut] != 1:  # permute so the cut vertex is color 1 everywhere
                a, b = tmp[cut], 1
                for v in sub:
                    if tmp[v] == a:
                        tmp[v] = b
                    elif tmp[v] == b:
                        tmp[v] = a
            for v in sub:
                colors[v] = tmp[v]
        return Coloring(colors), None

    # 2-connected delta-regular, not complete, not a cycle: some vertex v
    # has two non-adjacent neighbors u, w whose removal keeps G connected;
    # give them one color, then v sees at most delta-1 colors.
    for v in verts:
        nbs = sorted(g.adj[v])
        for u, w in itertools.combinations(nbs, 2):
            if g.has_edge(u, w):
                continue
            rest = [x for x in verts if x not in (u, w)]
            if len(_graph_components(g.adj, rest)) == 1:
                _greedy_reverse_bfs(g, rest, v, colors, delta, pre={u: 1, w: 1})
                return Coloring(colors), None
    raise RuntimeError("no splitting pair found in a regular 2-connected graph")


def chromatic_upper(g: Graph) -> int:
    """Number of colors brooks_proper_coloring uses across components."""
    worst = 0
    for comp in _graph_components(g.adj, range(1, g.n + 1)):
        sub, _ = _induced_graph(g, comp)
        coloring, _tag = brooks_proper_coloring(sub)
        worst = max(worst, coloring.span)
    return worst


# ---------------------------------------------------------------------------
# perfect matching backbone: lambda+3
# ---------------------------------------------------------------------------

def _exact_component_fallback(inst: BackboneInstance, comp: List[int], lam: int,
                              k: int, colors: List[int],
                              budget: Optional[int]) -> None:
    sub, old2new = _induced_instance(inst, comp)
    witness, stats = decide_bbc(sub, lam, k, budget=budget)
    if witness is None:
        raise RuntimeError(
            f"exact fallback found no coloring with k={k} ({stats.outcome})")
    for v in comp:
        colors[v] = witness.colors[old2new[v]]


def matching_lambda_plus_3(inst: BackboneInstance, lam: int,
                           budget: Optional[int] = None) -> Coloring:
    """lambda-backbone (lambda+3)-coloring for a perfect matching backbone,
    lambda >= 3.

    Each component gets a proper coloring whose classes map into
    {1, 2, lambda+2, lambda+3}; matched pairs that land on the same band
    (both low or both high) are repaired locally over the palette
    {1, 2, lambda+1, lambda+2, lambda+3} -- a repair only recolors the two
    matched endpoints, so earlier repairs stay valid.
    """
    if lam < 3:
        raise ValueError("lambda must be at least 3")
    cls = classify_backbone(inst)
    if cls.kind != BackboneClass.MATCHING:
        raise ValueError(f"backbone class is {cls.kind.value}, need Matching")
    if not cls.spanning:
        raise ValueError("matching does not cover every vertex")
    n = inst.n
    k = lam + 3
    colors = [0] * (n + 1)
    partner = {}
    for u, v in inst.backbone:
        partner[u] = v
        partner[v] = u
    palette = (1, 2, lam + 1, lam + 2, lam + 3)

    for comp in _graph_components(inst.graph.adj, range(1, n + 1)):
        sub_g, back = _induced_graph(inst.graph, comp)
        nn = len(comp)
        mm = len(sub_g.edges)
        if mm == nn * (nn - 1) // 2 and nn <= 5:
            # complete component (even order, so K2 or K4): exhaust the palette
            ok = False
            for combo in itertools.product(palette, repeat=nn):
                if len(set(combo)) != nn:
                    continue
                assign = {back[i]: combo[i] for i in range(nn)}
                if all(abs(assign[u] - assign[v]) >= lam
                       for u, v in inst.backbone if u in assign):
                    for v, c in assign.items():
                        colors[v] = c
                    ok = True
                    break
            if not ok:
                _exact_component_fallback(inst, comp, lam, k, colors, budget)
            continue
        if mm == nn and sub_g.max_degree == 2 and nn % 2 == 1:
            # odd cycle: cannot carry a perfect matching; kept for safety.
            order = _cycle_order(inst.graph, comp)
            while norm_edge(order[-1], order[0]) in inst.backbone:
                order = order[1:] + order[:1]
            for i, v in enumerate(order):
                colors[v] = 1 if i == 0 else (lam + 2 if i % 2 == 1 else 2)
            continue
        proper, _tag = brooks_proper_coloring(sub_g)
        used = proper.span
        maps = {1: (1,), 2: (1, lam + 2), 3: (1, 2, lam + 2),
                4: (1, 2, lam + 2, lam + 3)}
        if used > 4:
            _exact_component_fallback(inst, comp, lam, k, colors, budget)
            continue
        mapping = maps[used]
        for i, v in enumerate(back):
            colors[v] = mapping[proper.colors[i + 1] - 1]
        # repair matched pairs on the same band
        for u in comp:
            v = partner[u]
            if v < u:
                continue
            cu, cv = colors[u], colors[v]
            if abs(cu - cv) >= lam:
                continue
            fixed = False
            for au, av in itertools.product(palette, repeat=2):
                if abs(au - av) < lam:
                    continue
                if any(colors[w] == au for w in inst.graph.adj[u] if w != v):
                    continue
                if any(colors[w] == av for w in inst.graph.adj[v] if w != u):
                    continue
                colors[u], colors[v] = au, av
                fixed = True
                break
            if not fixed:
                _exact_component_fallback(inst, comp, lam, k, colors, budget)
                break
    return Coloring(colors)


# ---------------------------------------------------------------------------
# spanning galaxy backbone: lambda+4
# ---------------------------------------------------------------------------

def galaxy_lambda_plus_4(inst: BackboneInstance, lam: int,
                         budget: Optional[int] = None) -> Coloring:
    """lambda-backbone (lambda+4)-coloring for a spanning galaxy backbone,
    lambda >= 3.

    Stars are colored one at a time: the root tries colors from the ends
    of the palette inward (an extreme root leaves a full 4-color band for
    its leaves), each leaf greedily takes a color at distance >= lambda
    from the root.  A star that cannot be finished this way is searched
    exhaustively; a component that still fails is solved exactly.
    """
    if lam < 3:
        raise ValueError("lambda must be at least 3")
    cls = classify_backbone(inst)
    if cls.kind not in (BackboneClass.GALAXY, BackboneClass.MATCHING):
        raise ValueError(f"backbone class is {cls.kind.value}, need a galaxy")
    if not cls.spanning:
        raise ValueError("galaxy does not cover every vertex")
    n = inst.n
    k = lam + 4
    colors = [0] * (n + 1)

    # stars: root = the center (backbone degree >= 2), or for a lone edge
    # the endpoint with more graph neighbors
    stars: List[Tuple[int, List[int]]] = []
    for comp in _graph_components(inst.backbone_adj, range(1, n + 1)):
        centers = [v for v in comp if inst.backbone_degree(v) >= 2]
        if centers:
            root = centers[0]
        else:
            root = max(comp, key=lambda v: (inst.graph.degree(v), -v))
        stars.append((root, sorted(w for w in inst.backbone_adj[root])))
    stars.sort()

    star_of: Dict[int, int] = {}
    for i, (root, leaves) in enumerate(stars):
        star_of[root] = i
        for w in leaves:
            star_of[w] = i

    def far(c_root: int) -> List[int]:
        return [c for c in range(1, k + 1)
                if abs(c - c_root) >= lam]

    def try_star(root: int, leaves: List[int], root_cands: List[int]) -> bool:
        banned_root = {colors[w] for w in inst.graph.adj[root] if colors[w]}
        for rc in root_cands:
            if rc in banned_root:
                continue
            trial: Dict[int, int] = {root: rc}
            ok = True
            for leaf in leaves:
                banned = {colors[w] for w in inst.graph.adj[leaf] if colors[w]}
                banned |= {trial[w] for w in inst.graph.adj[leaf] if w in trial}
                pick = next((c for c in far(rc) if c not in banned), None)
                if pick is None:
                    ok = False
                    break
                trial[leaf] = pick
            if ok:
                for v, c in trial.items():
                    colors[v] = c
                return True
        return False

    def exhaustive_star(root: int, leaves: List[int]) -> bool:
        banned_root = {colors[w] for w in inst.graph.adj[root] if colors[w]}
        for rc in range(1, k + 1):
            if rc in banned_root:
                continue
            domains = []
            for leaf in leaves:
                banned = {colors[w] for w in inst.graph.adj[leaf] if colors[w]}
                domains.append([c for c in far(rc) if c not in banned])
            for combo in itertools.product(*domains):
                assign = dict(zip(leaves, combo))
                assign[root] = rc
                good = True
                for leaf in leaves:
                    for w in inst.graph.adj[leaf]:
                        if w in assign and w != leaf and assign[w] == assign[leaf]:
                            good = False
                            break
                    if not good:
                        break
                if good:
                    for v, c in assign.items():
                        colors[v] = c
                    return True
        return False

    comps = _graph_components(inst.graph.adj, range(1, n + 1))
    comp_of: Dict[int, int] = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i

    # extremes first, then inward
    prefs: List[int] = []
    lo, hi = 1, k
    while lo <= hi:
        prefs.append(lo)
        if hi != lo:
            prefs.append(hi)
        lo += 1
        hi -= 1

    failed: Set[int] = set()
    for comp in comps:
        ci = comp_of[comp[0]]
        sub_g, back = _induced_graph(inst.graph, comp)
        nn, mm = len(comp), len(sub_g.edges)
        if mm == nn * (nn - 1) // 2 and nn == 5:
            # complete K5: roots take the lowest colors, leaves go high
            comp_stars = sorted({star_of[v] for v in comp})
            nxt_root, nxt_leaf = 1, lam + 1
            for si in comp_stars:
                root, leaves = stars[si]
                colors[root] = nxt_root
                nxt_root += 1
                for leaf in leaves:
                    colors[leaf] = nxt_leaf
                    nxt_leaf += 1
            sub_inst, old2new = _induced_instance(inst, comp)
            sub_col = Coloring([0] + [colors[v] for v in sorted(comp)])
            if not verify_coloring(sub_inst, lam, sub_col):
                failed.add(ci)
            continue
        if mm == nn and sub_g.max_degree == 2 and nn % 2 == 1:
            # odd cycle: start at a non-backbone edge, then alternate
            order = _cycle_order(inst.graph, comp)
            while norm_edge(order[-1], order[0]) in inst.backbone:
                order = order[1:] + order[:1]
            for i, v in enumerate(order):
                colors[v] = 1 if i == 0 else (lam + 2 if i % 2 == 1 else 2)
            sub_inst, old2new = _induced_instance(inst, comp)
            sub_col = Coloring([0] + [colors[v] for v in sorted(comp)])
            if not verify_coloring(sub_inst, lam, sub_col):
                failed.add(ci)
            continue
        for si in sorted({star_of[v] for v in comp}):
            root, leaves = stars[si]
            if try_star(root, leaves, prefs):
                continue
            if exhaustive_star(root, leaves):
                continue
            failed.add(ci)
            break

    for ci in sorted(failed):
        _exact_component_fallback(inst, comps[ci], lam, k, colors, budget)
    return Coloring(colors)


# ---------------------------------------------------------------------------
# Hamiltonian path backbone: lambda+4
# ---------------------------------------------------------------------------

def three_color_cycle_triangles(cycle: Sequence[int],
                                triangles: Sequence[Tuple[int, int, int]]
                                ) -> Dict[int, int]:
    """3-color a graph that is a cycle through all vertices plus
    vertex-disjoint triangles partitioning them.

    Such graphs are always 3-chromatic; each triangle uses all three
    colors (so the color classes are automatically equal-sized).  Solved
    by backtracking over triangles in cycle order, six permutations each.
    """
    verts = list(cycle)
    vset = set(verts)
    if len(verts) != len(vset):
        raise ValueError("cycle repeats a vertex")
    covered: Set[int] = set()
    for tri in triangles:
        if len(set(tri)) != 3 or not set(tri) <= vset:
            raise ValueError(f"bad triangle {tri}")
        if covered & set(tri):
            raise ValueError("triangles overlap")
        covered |= set(tri)
    if covered != vset:
        raise ValueError("triangles do not partition the cycle vertices")

    pos = {v: i for i, v in enumerate(verts)}
    nbrs: Dict[int, Set[int]] = {v: set() for v in verts}
    nxt = len(verts)
    for i, v in enumerate(verts):
        w = verts[(i + 1) % nxt]
        if w != v:
            nbrs[v].add(w)
            nbrs[w].add(v)
    tris = sorted((tuple(sorted(t, key=lambda x: pos[x])) for t in triangles),
                  key=lambda t: pos[t[0]])
    color: Dict[int, int] = {}

    def fits(v: int, c: int) -> bool:
        return all(color.get(w) != c for w in nbrs[v])

    def solve(i: int) -> bool:
        if i == len(tris):
            return True
        a, b, cv = tris[i]
        for p in itertools.permutations((1, 2, 3)):
            if fits(a, p[0]) and fits(b, p[1]) and fits(cv, p[2]):
                color[a], color[b], color[cv] = p
                if solve(i + 1):
                    return True
                del color[a], color[b], color[cv]
        return False

    if not solve(0):
        raise RuntimeError("cycle-plus-triangles graph was not 3-colorable")
    return color


def _path_order(inst: BackboneInstance) -> List[int]:
    ends = sorted(v for v in range(1, inst.n + 1) if inst.backbone_degree(v) == 1)
    start = ends[0]
    order = [start]
    prev = 0
    cur = start
    while len(order) < inst.n:
        nxts = [w for w in inst.backbone_adj[cur] if w != prev]
        prev, cur = cur, nxts[0]
        order.append(cur)
    return order


def path_lambda_plus_4(inst: BackboneInstance, lam: int) -> Coloring:
    """lambda-backbone (lambda+4)-coloring along a Hamiltonian path
    backbone, for lambda >= 2 and maximum degree 4.

    Odd path positions take colors from {1,2,3}, even ones from
    {lambda+2, lambda+3, lambda+4}.  The pair (3, lambda+2) is the only
    band combination too close for a backbone edge, so the vertices
    receiving those colors are picked as one color class of a 3-colored
    cycle-plus-triangles graph over the odd cycles of the non-backbone
    remainder, which makes the class independent along the path.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    cls = classify_backbone(inst)
    if cls.kind != BackboneClass.HAMILTONIAN_PATH:
        raise ValueError(f"backbone class is {cls.kind.value}, need HamiltonianPath")
    if inst.graph.max_degree > 4:
        raise ValueError("maximum degree above 4")
    n = inst.n
    order = _path_order(inst)
    pos = {v: i + 1 for i, v in enumerate(order)}
    in_a = {v: pos[v] % 2 == 1 for v in order}  # odd positions: low band
    v1, vn = order[0], order[-1]
    colors = [0] * (n + 1)
    if n == 2:
        colors[v1], colors[vn] = 1, lam + 2
        return Coloring(colors)

    plain: List[Set[int]] = [set() for _ in range(n + 1)]
    for u, v in inst.plain_edges:
        plain[u].add(v)
        plain[v].add(u)

    # choose removal set X and the backbone remainder P'
    special_edge = False
    X: Set[int] = set()
    walk_paths: List[List[int]] = []  # each starts at its colored endpoint
    if vn in plain[v1]:
        special_edge = True
    else:
        # BFS from v1 in the non-backbone graph
        parent = {v1: 0}
        queue = deque([v1])
        while queue:
            x = queue.popleft()
            for y in sorted(plain[x]):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if vn in parent:
            chain = [vn]
            while chain[-1] != v1:
                chain.append(parent[chain[-1]])
            X = set(chain[1:-1])
            walk_paths.append(chain[:-1])  # vn, internal...; ends before v1
        else:
            for end in (v1, vn):
                if len(plain[end]) != 3:
                    continue
                for w in sorted(plain[end]):
                    # follow the path from `end` through w until a dead end
                    # (a cycle through `end` comes back instead)
                    seq = [end, w]
                    while True:
                        cur, prev = seq[-1], seq[-2]
                        nxts = [x for x in plain[cur] if x != prev]
                        if not nxts or seq[-1] == end:
                            break
                        seq.append(nxts[0])
                    if seq[-1] != end:
                        X |= set(seq[1:])
                        walk_paths.append(seq)
                        break

    keep = [v for v in range(1, n + 1) if v not in X]
    # non-backbone remainder D on the kept vertices
    d_adj: Dict[int, Set[int]] = {v: set() for v in keep}
    for v in keep:
        for w in plain[v]:
            if w in d_adj:
                d_adj[v].add(w)
    if special_edge:
        d_adj[v1].discard(vn)
        d_adj[vn].discard(v1)
    if any(len(d_adj[v]) > 2 for v in keep):
        raise RuntimeError("non-backbone remainder kept degree above 2")

    # backbone remainder edges (plus the closing edge in the cycle case)
    pprime: Set[Tuple[int, int]] = set(
        e for e in inst.backbone if e[0] not in X and e[1] not in X)
    if special_edge:
        pprime.add(norm_edge(v1, vn))

    # odd cycles of D and their picked triples
    comps = []
    seen: Set[int] = set()
    for s in sorted(keep):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in d_adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    triangles: List[Tuple[int, int, int]] = []
    for comp in comps:
        if len(comp) < 3 or len(comp) % 2 == 0:
            continue
        if any(len(d_adj[v]) != 2 for v in comp):
            continue
        mandated = [v for v in (v1, vn) if v in set(comp)]
        rest = [v for v in comp if v not in mandated]
        picked = tuple(sorted(mandated + rest[: 3 - len(mandated)]))
        triangles.append(picked)

    c3_class: Set[int] = set()
    if triangles:
        picked_all = sorted(v for t in triangles for v in t)
        pset = set(picked_all)
        preserved = [e for e in pprime if e[0] in pset and e[1] in pset]
        padj: Dict[int, List[int]] = {v: [] for v in picked_all}
        for a, b in preserved:
            padj[a].append(b)
            padj[b].append(a)
        fragments: List[List[int]] = []
        fvisited: Set[int] = set()
        for v in picked_all:
            if v in fvisited or len(padj[v]) > 1:
                continue
            seq = [v]
            fvisited.add(v)
            prev = 0
            cur = v
            while True:
                nxts = [w for w in padj[cur] if w != prev]
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
                seq.append(cur)
                fvisited.add(cur)
            fragments.append(seq)
        if len(fvisited) != len(picked_all):
            # remaining picked vertices all have two preserved edges: the
            # preserved part is already one full cycle
            star_order = []
            v = next(x for x in picked_all if x not in fvisited)
            prev = 0
            while True:
                star_order.append(v)
                fvisited.add(v)
                nxts = [w for w in padj[v] if w != prev]
                prev, v = v, nxts[0]
                if v == star_order[0]:
                    break
            cycle_order = star_order
        else:
            fragments = [f if f[0] <= f[-1] else f[::-1] for f in fragments]
            fragments.sort(key=min)
            cycle_order = [v for f in fragments for v in f]
        cstar = three_color_cycle_triangles(cycle_order, triangles)
        if v1 in cstar:
            role3 = cstar[v1]
        else:
            v2 = order[1]
            excluded = {cstar[x] for x in (v2, vn) if x in cstar}
            role3 = min(c for c in (1, 2, 3) if c not in excluded)
        c3_class = {v for v, c in cstar.items() if c == role3}

    for v in c3_class:
        colors[v] = 3 if in_a[v] else lam + 2
    colors[v1] = 3

    # 2-color the rest of the remainder, band by parity
    rest = [v for v in keep if not colors[v]]
    rset = set(rest)
    two: Dict[int, int] = {}
    for s in sorted(rest):
        if s in two:
            continue
        two[s] = 1
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in d_adj[x]:
                if y not in rset:
                    continue
                if y not in two:
                    two[y] = 3 - two[x]
                    queue.append(y)
                elif two[y] == two[x]:
                    raise RuntimeError("remainder not bipartite after removals")
    for v in rest:
        colors[v] = two[v] if in_a[v] else lam + 5 - two[v]

    # finish the removed vertices, walking inward from the colored end
    for seq in walk_paths:
        for i in range(1, len(seq)):
            v = seq[i]
            band = (1, 2) if in_a[v] else (lam + 3, lam + 4)
            prev_color = colors[seq[i - 1]]
            colors[v] = next(c for c in band if c != prev_color)

    result = Coloring(colors)
    verdict = verify_coloring(inst, lam, result)
    if not verdict:
        raise RuntimeError(f"path construction produced an invalid coloring: "
                           f"{verdict.reason}")
    return result


# ---------------------------------------------------------------------------
# spanning tree backbone, K4-free remainder: lambda+5
# ---------------------------------------------------------------------------

def tree_k4free_lambda_plus_5(inst: BackboneInstance, lam: int) -> Coloring:
    """lambda-backbone (lambda+5)-coloring for a spanning tree backbone
    whose non-backbone graph has no K4 component.

    The non-backbone graph has maximum degree 3 (the tree uses one edge
    slot everywhere), so each component 3-colors unless it is a K4.  The
    tree is bipartitioned and one side's colors are shifted up by
    lambda+2: bands {1,2,3} and {lambda+3..lambda+5}.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    n = inst.n
    if len(inst.backbone) != n - 1 or not inst.spanning:
        raise ValueError("backbone is not a spanning tree")
    cls = classify_backbone(inst)
    if cls.kind not in (BackboneClass.HAMILTONIAN_PATH, BackboneClass.SPANNING_TREE,
                        BackboneClass.GALAXY, BackboneClass.MATCHING):
        raise ValueError("backbone is not a spanning tree")

    plain_g = Graph(n)
    for u, v in inst.plain_edges:
        plain_g.add_edge(u, v)
    colors = [0] * (n + 1)
    for comp in _graph_components(plain_g.adj, range(1, n + 1)):
        sub, back = _induced_graph(plain_g, comp)
        proper, tag = brooks_proper_coloring(sub)
        if proper.span > 3:
            raise ValueError(
                "a component of the non-backbone graph is a K4; "
                "no 3-coloring exists")
        for i, v in enumerate(back):
            colors[v] = proper.colors[i + 1]

    side = {1: 0}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for w in inst.backbone_adj[v]:
            if w not in side:
                side[w] = 1 - side[v]
                queue.append(w)
    for v in range(1, n + 1):
        if side[v]:
            colors[v] += lam + 2
    return Coloring(colors)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def best_constructive(inst: BackboneInstance, lam: int,
                      budget: Optional[int] = None) -> Tuple[Coloring, str]:
    """Construct a coloring with the best bound this module offers for the
    instance's backbone class.

    Returns (coloring, label); the label names the bound and its value,
    e.g. "λ+3=8" or "2λ+2=10".
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    cls = classify_backbone(inst)
    kind = cls.kind

    if kind == BackboneClass.MATCHING and cls.spanning and lam >= 3:
        return matching_lambda_plus_3(inst, lam, budget=budget), f"λ+3={lam + 3}"
    if kind == BackboneClass.GALAXY and cls.spanning and lam >= 3:
        return galaxy_lambda_plus_4(inst, lam, budget=budget), f"λ+4={lam + 4}"
    if kind == BackboneClass.HAMILTONIAN_PATH:
        return path_lambda_plus_4(inst, lam), f"λ+4={lam + 4}"
    if kind == BackboneClass.SPANNING_TREE and lam + 5 <= 2 * lam + 2:
        try:
            return tree_k4free_lambda_plus_5(inst, lam), f"λ+5={lam + 5}"
        except ValueError:
            pass  # K4 component: fall through to the generic bound
    if kind == BackboneClass.GENERIC:
        raise ValueError("backbone contains a cycle; no construction applies")
    two = greedy_degenerate_bbc2(inst, budget=budget)
    lifted = lift_two_to_lambda(two, lam)
    if two.span <= 5:
        return lifted, f"2λ+1={2 * lam + 1}"
    return lifted, f"2λ+2={2 * lam + 2}"
