"""Gadget builders, wiring, and forcing-lemma checkers.

Each builder produces a GadgetFragment: a BackboneInstance plus a map of
named ports.  Port names follow the figure labels (v1..v12, u1..u8, w1..w3,
z1, z2, s1.., y1..y4).  When a gadget embeds copies of a smaller one, the
inner names get a suffix: a prime for the second copy of a pair ("v9'"),
or ".<i>" for column/branch i ("u3.1", "y4.2").  Vertices the figures leave
unlabeled are named <branch>.<index> ("1.2" = second triangle vertex of
branch 1).

Degree headroom per kind (free degree before hitting the cap of 4):

    X               v11: 3, v12: 1
    Y               u1: 1, u2: 2, u3: 2, u4: 1
    MatchingClause  b1..b3: 2 each
    W               v1..v3: 1 each
    GalaxyVariable  v1.<odd j>: 1 (clause slot)
    GalaxyClause    c1..c4: 1 each
    PCM             v1: 3, v_{8t}: 3, each v_{4i-2}/v_{4i}: 1
    Force           u1: 3, u8: 3
    N4              v6: 1, v9: 3
    FLambdaPlus4/F1 u3: 1, u4: 3, v6/v6': 1
    FLambdaPlus3    w1: 1, w2: 1, w3: 1
    FLambdaPlus2    z1: 2, z2: 1
    TreeVariable    s1..s2m: 1 each
    TreeClause      y1: 0, y4: 1, y2: 1, y3: 0 (y3's last slot is its anchor)

Tree-reduction kinds also carry `anchors`: the ports that must become
leaves of the auxiliary backbone tree, each tagged with the parity of the
tree depth they require ("even" or "odd").

Lemma checks compute the exact projection of the set of valid colorings
onto the lemma's ports: for every candidate port tuple we run the exact
solver with the tuple pinned (plus the lemma's boundary condition) and
keep the feasible ones.  The reported count is the number of feasible
port tuples.  Skeleton mode replaces each subgadget by the boundary
condition its own lemma proves, on a reduced graph, mirroring how the
proofs themselves compose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .core import BackboneInstance, Graph, emit_instance, norm_edge
from .solver import SolveStats, decide_bbc

ROLE_CHARACTERISTIC = "characteristic"
ROLE_CONNECTION = "connection"
ROLE_GENERIC = "generic"

KIND_NAMES = (
    "X",
    "Y",
    "MatchingClause",
    "W",
    "GalaxyVariable",
    "GalaxyClause",
    "PCM",
    "Force",
    "PathClauseCycle",
    "N4",
    "NLambdaPlus1",
    "FLambdaPlus4",
    "F1",
    "FLambdaPlus3",
    "FLambdaPlus2",
    "TreeVariable",
    "TreeClause",
    "AuxBackboneTree",
)

_PARAM_KINDS = {"PCM": 2, "GalaxyVariable": 1, "TreeVariable": 1}  # name -> min value


@dataclass(frozen=True)
class GadgetKind:
    """A gadget family name plus its parameter, if the family takes one."""

    name: str
    param: Optional[int] = None
    leafspec: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.name not in KIND_NAMES:
            raise ValueError("unknown gadget kind: %r" % (self.name,))
        if self.name in _PARAM_KINDS:
            low = _PARAM_KINDS[self.name]
            if self.param is None or self.param < low:
                raise ValueError(
                    "%s requires an integer parameter >= %d" % (self.name, low)
                )
        elif self.param is not None:
            raise ValueError("%s takes no parameter" % (self.name,))
        if self.name == "AuxBackboneTree":
            if not self.leafspec:
                raise ValueError("AuxBackboneTree requires a leafspec")
            for p in self.leafspec:
                if p not in ("even", "odd"):
                    raise ValueError("leafspec entries must be 'even' or 'odd'")
        elif self.leafspec is not None:
            raise ValueError("%s takes no leafspec" % (self.name,))


@dataclass
class GadgetFragment:
    kind: GadgetKind
    instance: BackboneInstance
    ports: Dict[str, int]
    roles: Dict[str, str]
    anchors: Tuple[Tuple[str, str], ...] = ()

    def port(self, name: str) -> int:
        if name not in self.ports:
            raise KeyError("fragment %s has no port %r" % (self.kind.name, name))
        return self.ports[name]


class _Builder:
    """Accumulates vertices and edges, then freezes into a fragment."""

    def __init__(self) -> None:
        self.n = 0
        self.plain: List[Tuple[int, int]] = []
        self.backbone: List[Tuple[int, int]] = []
        self.ports: Dict[str, int] = {}
        self.roles: Dict[str, str] = {}
        self.anchors: List[Tuple[str, str]] = []

    def vertex(self, name: Optional[str] = None, role: str = ROLE_GENERIC) -> int:
        self.n += 1
        if name is not None:
            if name in self.ports:
                raise ValueError("duplicate port name %r" % (name,))
            self.ports[name] = self.n
            self.roles[name] = role
        return self.n

    def edge(self, u: int, v: int) -> None:
        self.plain.append((u, v))

    def bedge(self, u: int, v: int) -> None:
        self.backbone.append((u, v))

    def anchor(self, name: str, parity: str) -> None:
        self.anchors.append((name, parity))

    def embed(self, frag: GadgetFragment, rename: Callable[[str], str]) -> Dict[int, int]:
        """Copy a fragment in, renaming its ports; returns old->new vertex map."""
        off = self.n
        self.n += frag.instance.graph.n
        vmap = {v: v + off for v in range(1, frag.instance.graph.n + 1)}
        for e in sorted(frag.instance.graph.edges):
            pair = (vmap[e[0]], vmap[e[1]])
            if e in frag.instance.backbone:
                self.backbone.append(pair)
            else:
                self.plain.append(pair)
        for name, v in frag.ports.items():
            new = rename(name)
            if new in self.ports:
                raise ValueError("port clash while embedding: %r" % (new,))
            self.ports[new] = vmap[v]
            self.roles[new] = frag.roles[name]
        for name, parity in frag.anchors:
            self.anchors.append((rename(name), parity))
        return vmap

    def freeze(self, kind: GadgetKind) -> GadgetFragment:
        g = Graph(self.n)
        for u, v in self.plain:
            g.add_edge(u, v)
        for u, v in self.backbone:
            g.add_edge(u, v)
        inst = BackboneInstance(g, set(norm_edge(u, v) for u, v in self.backbone))
        return GadgetFragment(kind, inst, dict(self.ports), dict(self.roles),
                              tuple(self.anchors))


# ---------------------------------------------------------------------------
# Matching gadgets (X, Y, clause triangle)
# ---------------------------------------------------------------------------

_X_BACKBONE = [(1, 5), (2, 3), (6, 7), (4, 8), (9, 11), (10, 12)]
_X_PLAIN = [
    (5, 6), (5, 2), (1, 2), (1, 6), (6, 2),
    (7, 8), (3, 4), (7, 4), (3, 8),
    (5, 9), (1, 9), (8, 10), (4, 10), (9, 10),
    (7, 12), (3, 12),
]


def _build_x(lam: int) -> GadgetFragment:
    b = _Builder()
    for i in range(1, 13):
        b.vertex("v%d" % i)
    for u, v in _X_BACKBONE:
        b.bedge(u, v)
    for u, v in _X_PLAIN:
        b.edge(u, v)
    return b.freeze(GadgetKind("X"))


def _build_y(lam: int) -> GadgetFragment:
    b = _Builder()
    x = _build_x(lam)
    b.embed(x, lambda s: s)
    b.embed(x, lambda s: s + "'")
    for i in range(1, 5):
        b.vertex("u%d" % i)
    p = b.ports
    b.bedge(p["u1"], p["u2"])
    b.bedge(p["u3"], p["u4"])
    b.edge(p["v12"], p["v12'"])
    b.edge(p["u1"], p["v11"])
    b.edge(p["u2"], p["v11"])
    b.edge(p["u4"], p["v11"])
    b.edge(p["u1"], p["v11'"])
    b.edge(p["u3"], p["v11'"])
    b.edge(p["u4"], p["v11'"])
    return b.freeze(GadgetKind("Y"))


def _build_matching_clause(lam: int) -> GadgetFragment:
    b = _Builder()
    a = [b.vertex("a%d" % i) for i in (1, 2, 3)]
    bs = [b.vertex("b%d" % i) for i in (1, 2, 3)]
    b.edge(a[0], a[1])
    b.edge(a[1], a[2])
    b.edge(a[0], a[2])
    for ai, bi in zip(a, bs):
        b.bedge(ai, bi)
    return b.freeze(GadgetKind("MatchingClause"))


# ---------------------------------------------------------------------------
# Galaxy gadgets (W, variable ring, clause K4)
# ---------------------------------------------------------------------------

def _add_w(b: _Builder, rename: Callable[[str], str]) -> None:
    w = b.vertex(rename("w"))
    for i in (1, 2, 3):
        u = b.vertex(rename("u%d" % i))
        t = [b.vertex(rename("%d.%d" % (i, j))) for j in (1, 2, 3)]
        v = b.vertex(rename("v%d" % i))
        b.bedge(u, w)
        for x in t:
            b.edge(u, x)
            b.bedge(x, v)
        b.edge(t[0], t[1])
        b.edge(t[0], t[2])
        b.edge(t[1], t[2])


def _build_w(lam: int) -> GadgetFragment:
    b = _Builder()
    _add_w(b, lambda s: s)
    return b.freeze(GadgetKind("W"))


def _build_galaxy_variable(lam: int, k: int) -> GadgetFragment:
    b = _Builder()
    for j in range(1, 2 * k + 1):
        _add_w(b, lambda s, j=j: "%s.%d" % (s, j))
    for j in range(1, 2 * k + 1):
        nxt = j % (2 * k) + 1
        b.edge(b.ports["v3.%d" % j], b.ports["v2.%d" % nxt])
    return b.freeze(GadgetKind("GalaxyVariable", k))


def _build_galaxy_clause(lam: int) -> GadgetFragment:
    b = _Builder()
    c = [b.vertex("c%d" % i) for i in (1, 2, 3, 4)]
    for u, v in itertools.combinations(c, 2):
        b.edge(u, v)
    return b.freeze(GadgetKind("GalaxyClause"))


# ---------------------------------------------------------------------------
# Path gadgets (PCM, Force, clause cycle)
# ---------------------------------------------------------------------------

def _build_pcm(lam: int, t: int) -> GadgetFragment:
    b = _Builder()
    v = [b.vertex("v%d" % i) for i in range(1, 8 * t + 1)]
    for i in range(8 * t - 1):
        b.bedge(v[i], v[i + 1])
    for i in range(1, 2 * t):
        b.edge(v[4 * i - 2], v[4 * i + 2])
    b.edge(v[8 * t - 2], v[2])
    for i in range(1, 2 * t + 1):
        b.edge(v[4 * i - 3], v[4 * i - 1])
    return b.freeze(GadgetKind("PCM", t))


_FORCE_PLAIN = [(2, 4), (4, 6), (3, 5), (3, 7), (5, 7)]


def _build_force(lam: int) -> GadgetFragment:
    b = _Builder()
    u = [b.vertex("u%d" % i) for i in range(1, 9)]
    for i in range(7):
        b.bedge(u[i], u[i + 1])
    for x, y in _FORCE_PLAIN:
        b.edge(u[x - 1], u[y - 1])
    return b.freeze(GadgetKind("Force"))


def _build_path_clause_cycle(lam: int) -> GadgetFragment:
    b = _Builder()
    u8 = b.vertex("u8")
    ws = []
    for j in (1, 2, 3):
        ws.append(b.vertex("w%d.1" % j))
        ws.append(b.vertex("w%d.2" % j))
    ring = [u8] + ws
    for i in range(7):
        b.edge(ring[i], ring[(i + 1) % 7])
    return b.freeze(GadgetKind("PathClauseCycle"))


# ---------------------------------------------------------------------------
# Tree gadgets (N4 family, F family, variable ring, clause branches)
# ---------------------------------------------------------------------------

_N4_BACKBONE = [(1, 5), (2, 5), (3, 7), (4, 7), (5, 6), (6, 7), (6, 8), (8, 9)]
_N4_PLAIN = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (5, 8), (7, 8)]


def _build_n4(lam: int, mirrored: bool) -> GadgetFragment:
    b = _Builder()
    for i in range(1, 10):
        role = ROLE_CONNECTION if i == 6 else ROLE_GENERIC
        b.vertex("v%d" % i, role)
    for u, v in _N4_BACKBONE:
        b.bedge(u, v)
    for u, v in _N4_PLAIN:
        b.edge(u, v)
    b.anchor("v6", "odd" if mirrored else "even")
    return b.freeze(GadgetKind("NLambdaPlus1" if mirrored else "N4"))


def _build_f_lambda_plus_4(lam: int, mirrored: bool) -> GadgetFragment:
    b = _Builder()
    sub = _build_n4(lam, mirrored)
    b.embed(sub, lambda s: s)
    b.embed(sub, lambda s: s + "'")
    for i in range(1, 5):
        role = {3: ROLE_CHARACTERISTIC, 4: ROLE_CONNECTION}.get(i, ROLE_GENERIC)
        b.vertex("u%d" % i, role)
    p = b.ports
    for x, y in itertools.combinations((p["v9"], p["u1"], p["u2"], p["v9'"]), 2):
        b.edge(x, y)
    b.bedge(p["u1"], p["u3"])
    b.bedge(p["u2"], p["u3"])
    b.bedge(p["u3"], p["u4"])
    b.anchor("u4", "odd" if mirrored else "even")
    return b.freeze(GadgetKind("F1" if mirrored else "FLambdaPlus4"))


def _build_f_lambda_plus_3(lam: int) -> GadgetFragment:
    b = _Builder()
    cols = (_build_f_lambda_plus_4(lam, True),
            _build_f_lambda_plus_4(lam, False),
            _build_f_lambda_plus_4(lam, True))
    for i, sub in enumerate(cols, start=1):
        b.embed(sub, lambda s, i=i: "%s.%d" % (s, i))
    w = []
    for i in (1, 2, 3):
        role = {1: ROLE_CONNECTION, 2: ROLE_CHARACTERISTIC}.get(i, ROLE_GENERIC)
        w.append(b.vertex("w%d" % i, role))
    b.bedge(w[0], w[1])
    b.bedge(w[1], w[2])
    b.edge(w[0], w[2])
    for i in (1, 2, 3):
        b.edge(w[i - 1], b.ports["u3.%d" % i])
    b.anchor("w1", "even")
    return b.freeze(GadgetKind("FLambdaPlus3"))


def _build_f_lambda_plus_2(lam: int) -> GadgetFragment:
    b = _Builder()
    cols = (_build_f_lambda_plus_4(lam, True),
            _build_f_lambda_plus_3(lam),
            _build_f_lambda_plus_4(lam, False))
    for i, sub in enumerate(cols, start=1):
        b.embed(sub, lambda s, i=i: "%s.%d" % (s, i))
    z1 = b.vertex("z1", ROLE_CONNECTION)
    z2 = b.vertex("z2", ROLE_CHARACTERISTIC)
    b.bedge(z1, z2)
    b.edge(z1, b.ports["u3.1"])
    b.edge(z2, b.ports["w2.2"])
    b.edge(z2, b.ports["u3.3"])
    b.anchor("z1", "even")
    return b.freeze(GadgetKind("FLambdaPlus2"))


def _build_tree_variable(lam: int, m: int) -> GadgetFragment:
    b = _Builder()
    sub = _build_f_lambda_plus_2(lam)
    for j in range(1, 2 * m + 1):
        b.embed(sub, lambda s, j=j: "%s.%d" % (s, j))
    s = [b.vertex("s%d" % j) for j in range(1, 2 * m + 1)]
    for j in range(1, 2 * m + 1):
        b.bedge(s[j - 1], b.ports["z2.%d" % j])
    ring: Set[Tuple[int, int]] = set()
    for j in range(2 * m):
        ring.add(norm_edge(s[j], s[(j + 1) % (2 * m)]))
    for u, v in sorted(ring):
        b.edge(u, v)
    return b.freeze(GadgetKind("TreeVariable", m))


def _build_tree_clause(lam: int) -> GadgetFragment:
    b = _Builder()
    f1 = _build_f_lambda_plus_4(lam, True)
    f7 = _build_f_lambda_plus_3(lam)
    y1s = []
    for br in (1, 2, 3):
        b.embed(f1, lambda s, br=br: "%s.%d1" % (s, br))
        b.embed(f7, lambda s, br=br: "%s.%d2" % (s, br))
        b.embed(f1, lambda s, br=br: "%s.%d3" % (s, br))
        y1 = b.vertex("y1.%d" % br)
        y2 = b.vertex("y2.%d" % br, ROLE_CONNECTION)
        y3 = b.vertex("y3.%d" % br, ROLE_CONNECTION)
        y4 = b.vertex("y4.%d" % br)
        b.edge(y1, b.ports["u3.%d1" % br])
        b.bedge(y1, y2)
        b.edge(y2, y3)
        b.edge(y3, b.ports["w2.%d2" % br])
        b.bedge(y3, y4)
        b.edge(y4, b.ports["u3.%d3" % br])
        b.anchor("y2.%d" % br, "odd")
        b.anchor("y3.%d" % br, "odd")
        y1s.append(y1)
    for u, v in itertools.combinations(y1s, 2):
        b.edge(u, v)
    return b.freeze(GadgetKind("TreeClause"))


def plan_aux_spine(parities: Sequence[str]) -> List[int]:
    """Assign each anchor (by required leaf parity) a spine depth.

    Returns depth[i] for anchor i: the anchor hangs off the spine vertex at
    that depth, so its own depth is depth[i]+1 with the required parity.
    Spine depths are consumed in increasing order, one leaf per spine
    vertex, keeping the tree binary.
    """
    depths: List[int] = []
    next_even = 1  # spine depth odd -> leaf depth even
    next_odd = 0
    for p in parities:
        if p == "even":
            d = next_even
            next_even += 2
        elif p == "odd":
            d = next_odd
            next_odd += 2
        else:
            raise ValueError("parity must be 'even' or 'odd': %r" % (p,))
        depths.append(d)
    return depths


def _build_aux_tree(lam: int, leafspec: Tuple[str, ...]) -> GadgetFragment:
    b = _Builder()
    depths = plan_aux_spine(leafspec)
    top = max(depths)
    spine = [b.vertex("r" if d == 0 else "p%d" % d) for d in range(top + 1)]
    for d in range(top):
        b.bedge(spine[d], spine[d + 1])
    for i, d in enumerate(depths, start=1):
        leaf = b.vertex("leaf%d" % i)
        b.bedge(spine[d], leaf)
    return b.freeze(GadgetKind("AuxBackboneTree", leafspec=leafspec))


_BUILDERS: Dict[str, Callable[..., GadgetFragment]] = {
    "X": _build_x,
    "Y": _build_y,
    "MatchingClause": _build_matching_clause,
    "W": _build_w,
    "GalaxyVariable": _build_galaxy_variable,
    "GalaxyClause": _build_galaxy_clause,
    "PCM": _build_pcm,
    "Force": _build_force,
    "PathClauseCycle": _build_path_clause_cycle,
    "N4": lambda lam: _build_n4(lam, False),
    "NLambdaPlus1": lambda lam: _build_n4(lam, True),
    "FLambdaPlus4": lambda lam: _build_f_lambda_plus_4(lam, False),
    "F1": lambda lam: _build_f_lambda_plus_4(lam, True),
    "FLambdaPlus3": _build_f_lambda_plus_3,
    "FLambdaPlus2": _build_f_lambda_plus_2,
    "TreeVariable": _build_tree_variable,
    "TreeClause": _build_tree_clause,
}


def build_gadget(kind, lam: int, *, param: Optional[int] = None,
                 leafspec: Optional[Sequence[str]] = None) -> GadgetFragment:
    """Build the named gadget.  `kind` is a GadgetKind or a kind name."""
    if lam < 2:
        raise ValueError("lambda must be >= 2")
    if isinstance(kind, str):
        kind = GadgetKind(kind, param,
                          tuple(leafspec) if leafspec is not None else None)
    if kind.name == "AuxBackboneTree":
        frag = _build_aux_tree(lam, kind.leafspec)
    elif kind.param is not None:
        frag = _BUILDERS[kind.name](lam, kind.param)
    else:
        frag = _BUILDERS[kind.name](lam)
    frag.instance.lambda_hint = lam
    return frag


# ---------------------------------------------------------------------------
# Wiring
# ---------------------------------------------------------------------------

def wire(fragments: Sequence[GadgetFragment],
         joins: Sequence[Tuple[Tuple[int, str], Tuple[int, str], bool]],
         ) -> BackboneInstance:
    """Take the disjoint union of fragments and add join edges.

    Each join is ((fragment_index, port_name), (fragment_index, port_name),
    backbone_flag).  Vertex numbering is the fragments' own, shifted by the
    sizes of all preceding fragments.  Joins that would push a vertex past
    degree 4 are rejected with the offending port named.
    """
    offsets = []
    total = 0
    for frag in fragments:
        offsets.append(total)
        total += frag.instance.graph.n
    g = Graph(total)
    backbone: Set[Tuple[int, int]] = set()
    for frag, off in zip(fragments, offsets):
        for e in sorted(frag.instance.graph.edges):
            g.add_edge(e[0] + off, e[1] + off)
            if e in frag.instance.backbone:
                backbone.add((e[0] + off, e[1] + off))

    def resolve(ref: Tuple[int, str]) -> Tuple[int, str]:
        idx, name = ref
        if not 0 <= idx < len(fragments):
            raise ValueError("join references fragment %d, have %d"
                             % (idx, len(fragments)))
        frag = fragments[idx]
        if name not in frag.ports:
            raise ValueError("dangling port: fragment %d (%s) has no port %r"
                             % (idx, frag.kind.name, name))
        return frag.ports[name] + offsets[idx], "%d:%s" % (idx, name)

    for a, bref, is_backbone in joins:
        u, ua = resolve(a)
        v, vb = resolve(bref)
        for vert, label in ((u, ua), (v, vb)):
            if g.degree(vert) >= 4:
                raise ValueError("degree overflow at port %s (already 4)" % label)
        g.add_edge(u, v)
        if is_backbone:
            backbone.add(norm_edge(u, v))
    return BackboneInstance(g, backbone)


# ---------------------------------------------------------------------------
# Lemma checking
# ---------------------------------------------------------------------------

@dataclass
class LemmaCheckReport:
    lemma: str
    lam: int
    mode: str
    k: int
    count: int
    projected: Tuple[Tuple[int, ...], ...]
    expected: Tuple[Tuple[int, ...], ...]
    verdict: str  # Pass | Fail | Unknown
    ports: Tuple[str, ...] = ()

    def summary(self) -> str:
        return ("%s lam=%d k=%d mode=%s: %s (%d feasible port tuples)"
                % (self.lemma, self.lam, self.k, self.mode, self.verdict,
                   self.count))


def project_ports(inst: BackboneInstance, lam: int, k: int,
                  port_vertices: Sequence[int],
                  boundary: Optional[Dict[int, Iterable[int]]] = None,
                  budget: Optional[int] = None,
                  ) -> Tuple[Set[Tuple[int, ...]], List[Tuple[int, ...]]]:
    """Exact projection of the valid-coloring set onto the given vertices.

    Tries every candidate color tuple for the ports, pinning it alongside
    the boundary, and asks the exact solver for feasibility.  Returns the
    feasible tuples plus any tuples the solver could not settle in budget.
    """
    base = {v: tuple(cs) for v, cs in (boundary or {}).items()}
    feasible: Set[Tuple[int, ...]] = set()
    unknown: List[Tuple[int, ...]] = []
    for tup in itertools.product(range(1, k + 1), repeat=len(port_vertices)):
        pins = dict(base)
        ok = True
        for v, c in zip(port_vertices, tup):
            if v in pins and c not in pins[v]:
                ok = False
                break
            pins[v] = (c,)
        if not ok:
            continue
        witness, stats = decide_bbc(inst, lam, k, boundary=pins, budget=budget)
        if stats.outcome == "UNKNOWN":
            unknown.append(tup)
        elif witness is not None:
            feasible.add(tup)
    return feasible, unknown


def _low(n: int) -> Callable[[int], Tuple[int, ...]]:
    return lambda lam: tuple(range(1, n + 1))


def _high(n: int, k_off: int) -> Callable[[int], Tuple[int, ...]]:
    return lambda lam: tuple(range(lam + k_off - n + 1, lam + k_off + 1))


@dataclass(frozen=True)
class _LemmaSpec:
    kind: str
    param: Optional[int]
    k_off: int
    ports: Tuple[str, ...]
    boundary: Tuple[Tuple[str, Callable[[int], Tuple[int, ...]]], ...]
    pins: Tuple[Tuple[str, Callable[[int], int]], ...]
    expected: Callable[[int], Set[Tuple[int, ...]]]


LEMMA_SPECS: Dict[str, _LemmaSpec] = {
    "L1": _LemmaSpec(
        "X", None, 2, ("v11", "v12"), (), (),
        lambda lam: {(1, lam + 2), (lam + 2, 1)}),
    "L2": _LemmaSpec(
        "Y", None, 2, ("u1", "u2", "u3", "u4"), (), (),
        lambda lam: {(2, lam + 2, 1, lam + 1), (lam + 1, 1, lam + 2, 2)}),
    "L3": _LemmaSpec(
        "W", None, 3, ("v1", "v2", "v3"), (), (),
        lambda lam: {(1, 1, 1), (lam + 3,) * 3}),
    "L4": _LemmaSpec(
        "PCM", 2, 3, ("v3", "v7", "v11", "v15"),
        (("v1", _low(3)),), (),
        lambda lam: {(1, 2, 1, 2), (2, 1, 2, 1)}),
    "L5": _LemmaSpec(
        "Force", None, 3, ("u8",), (("u1", _low(3)),), (),
        lambda lam: {(lam + 3,)}),
    "L6": _LemmaSpec(
        "N4", None, 4, ("v9",), (("v6", _low(4)),), (),
        lambda lam: {(1,), (2,), (3,)}),
    "C1": _LemmaSpec(
        "NLambdaPlus1", None, 4, ("v9",), (("v6", _high(4, 4)),), (),
        lambda lam: {(lam + 2,), (lam + 3,), (lam + 4,)}),
    "L7": _LemmaSpec(
        "FLambdaPlus4", None, 4, ("u3",),
        (("u4", _low(4)), ("v9", _low(3)), ("v9'", _low(3))), (),
        lambda lam: {(lam + 4,)}),
    "C2": _LemmaSpec(
        "F1", None, 4, ("u3",),
        (("u4", _high(4, 4)), ("v9", _high(3, 4)), ("v9'", _high(3, 4))), (),
        lambda lam: {(1,)}),
    "L8": _LemmaSpec(
        "FLambdaPlus3", None, 4, ("w2",),
        (("w1", _low(4)),),
        (("u3.1", lambda lam: 1), ("u3.2", lambda lam: lam + 4),
         ("u3.3", lambda lam: 1)),
        lambda lam: {(lam + 3,)}),
    "L9": _LemmaSpec(
        "FLambdaPlus2", None, 4, ("z2",),
        (("z1", _low(4)),),
        (("u3.1", lambda lam: 1), ("w2.2", lambda lam: lam + 3),
         ("u3.3", lambda lam: lam + 4)),
        lambda lam: {(lam + 2,)}),
}


def _skeleton_for(lemma: str) -> Optional[Tuple[GadgetFragment, Tuple[str, ...]]]:
    """Reduced graph for skeleton mode: subgadget interiors removed, their
    ports kept as stub vertices that the lemma's pins will constrain."""
    b = _Builder()
    if lemma in ("L7", "C2"):
        for i in range(1, 5):
            b.vertex("u%d" % i)
        v9 = b.vertex("v9")
        v9p = b.vertex("v9'")
        p = b.ports
        for x, y in itertools.combinations((v9, p["u1"], p["u2"], v9p), 2):
            b.edge(x, y)
        b.bedge(p["u1"], p["u3"])
        b.bedge(p["u2"], p["u3"])
        b.bedge(p["u3"], p["u4"])
        kind = "FLambdaPlus4" if lemma == "L7" else "F1"
    elif lemma == "L8":
        w = [b.vertex("w%d" % i) for i in (1, 2, 3)]
        stubs = [b.vertex("u3.%d" % i) for i in (1, 2, 3)]
        b.bedge(w[0], w[1])
        b.bedge(w[1], w[2])
        b.edge(w[0], w[2])
        for wi, ui in zip(w, stubs):
            b.edge(wi, ui)
        kind = "FLambdaPlus3"
    elif lemma == "L9":
        z1 = b.vertex("z1")
        z2 = b.vertex("z2")
        stubs = [b.vertex(nm) for nm in ("u3.1", "w2.2", "u3.3")]
        b.bedge(z1, z2)
        b.edge(z1, stubs[0])
        b.edge(z2, stubs[1])
        b.edge(z2, stubs[2])
        kind = "FLambdaPlus2"
    else:
        return None
    spec = LEMMA_SPECS[lemma]
    return b.freeze(GadgetKind(kind)), spec.ports


def check_gadget_lemma(lemma: str, lam: int, mode: str = "full",
                       budget: Optional[int] = None) -> LemmaCheckReport:
    """Check one forcing lemma by exact projection.  See module docstring."""
    if lemma not in LEMMA_SPECS:
        raise ValueError("unknown lemma id: %r" % (lemma,))
    if mode not in ("full", "skeleton"):
        raise ValueError("mode must be 'full' or 'skeleton'")
    if lam < 2:
        raise ValueError("lambda must be >= 2")
    spec = LEMMA_SPECS[lemma]
    k = lam + spec.k_off

    used_mode = mode
    if mode == "skeleton":
        skel = _skeleton_for(lemma)
        if skel is None:
            used_mode = "full"  # gadget has no subgadgets; graphs coincide
    if used_mode == "skeleton":
        frag, _ = skel
    else:
        frag = build_gadget(spec.kind, lam, param=spec.param)

    boundary: Dict[int, Tuple[int, ...]] = {}
    for name, dom in spec.boundary:
        boundary[frag.port(name)] = dom(lam)
    for name, pin in spec.pins:
        boundary[frag.port(name)] = (pin(lam),)
    port_vertices = [frag.port(n) for n in spec.ports]

    feasible, unknown = project_ports(frag.instance, lam, k, port_vertices,
                                      boundary=boundary, budget=budget)
    expected = spec.expected(lam)
    if unknown:
        verdict = "Unknown"
    elif feasible == expected:
        verdict = "Pass"
    else:
        verdict = "Fail"
    return LemmaCheckReport(
        lemma=lemma, lam=lam, mode=used_mode, k=k, count=len(feasible),
        projected=tuple(sorted(feasible)), expected=tuple(sorted(expected)),
        verdict=verdict, ports=spec.ports)
