"""Core graph types, the .bbc file format, backbone classification and
coloring verification.

File format (.bbc)
------------------
Line-oriented, 1-indexed vertices::

    c <comment>                 ignored
    p bbc <n> <m_plain> <m_backbone>
    e <u> <v>                   plain (non-backbone) edge
    b <u> <v>                   backbone edge

The edge set of the graph is the union of the ``e`` and ``b`` lines; an
edge may be declared only once.  Coloring files are lines of
``<vertex> <color>`` with optional ``c`` comments; color 0 means
"uncolored".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

Edge = Tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    """Normalize an edge to (min, max) order."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph on vertices 1..n (no loops, no multi-edges)."""

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.edges: Set[Edge] = set()
        self.adj: List[Set[int]] = [set() for _ in range(n + 1)]
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (1 <= u <= self.n) or not (1 <= v <= self.n):
            raise ValueError(f"edge ({u},{v}) out of range 1..{self.n}")
        e = norm_edge(u, v)
        if e in self.edges:
            raise ValueError(f"duplicate edge ({e[0]},{e[1]})")
        self.edges.add(e)
        self.adj[u].add(v)
        self.adj[v].add(u)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj[1:]), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


class BackboneClass(enum.Enum):
    MATCHING = "Matching"
    GALAXY = "Galaxy"
    HAMILTONIAN_PATH = "HamiltonianPath"
    SPANNING_TREE = "SpanningTree"
    FOREST = "Forest"
    GENERIC = "Generic"


@dataclass
class Classification:
    kind: BackboneClass
    spanning: bool  # every vertex touches a backbone edge

    def __str__(self):
        return f"{self.kind.value} (spanning={self.spanning})"


class BackboneInstance:
    """A graph together with a backbone subgraph (subset of its edges).

    ``lambda_hint`` is an optional default separation parameter carried by
    the instance; operations take an explicit lambda and only fall back to
    the hint when the caller passes none.
    """

    def __init__(self, graph: Graph, backbone: Iterable[Edge], lambda_hint: Optional[int] = None):
        self.graph = graph
        self.backbone: Set[Edge] = set()
        for u, v in backbone:
            e = norm_edge(u, v)
            if e in self.backbone:
                raise ValueError(f"duplicate backbone edge ({e[0]},{e[1]})")
            if e not in graph.edges:
                raise ValueError(f"backbone edge ({e[0]},{e[1]}) is not an edge of the graph")
            self.backbone.add(e)
        if lambda_hint is not None and lambda_hint < 2:
            raise ValueError("lambda_hint must be at least 2")
        self.lambda_hint = lambda_hint
        self.backbone_adj: List[Set[int]] = [set() for _ in range(graph.n + 1)]
        for u, v in self.backbone:
            self.backbone_adj[u].add(v)
            self.backbone_adj[v].add(u)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def plain_edges(self) -> Set[Edge]:
        return self.graph.edges - self.backbone

    def backbone_degree(self, v: int) -> int:
        return len(self.backbone_adj[v])

    @property
    def spanning(self) -> bool:
        return all(self.backbone_adj[v] for v in range(1, self.n + 1))

    def __eq__(self, other):
        return (
            isinstance(other, BackboneInstance)
            and self.graph == other.graph
            and self.backbone == other.backbone
        )

    def __repr__(self):
        return f"BackboneInstance(n={self.n}, m={len(self.graph.edges)}, backbone={len(self.backbone)})"


@dataclass
class Coloring:
    """Vertex coloring; colors[v] for v in 1..n, 0 = uncolored (colors[0] unused)."""

    colors: List[int]

    @classmethod
    def empty(cls, n: int) -> "Coloring":
        return cls([0] * (n + 1))

    @classmethod
    def from_dict(cls, n: int, mapping: Dict[int, int]) -> "Coloring":
        c = [0] * (n + 1)
        for v, col in mapping.items():
            if not (1 <= v <= n):
                raise ValueError(f"vertex {v} out of range 1..{n}")
            if col < 0:
                raise ValueError(f"negative color {col} for vertex {v}")
            c[v] = col
        return cls(c)

    @property
    def n(self) -> int:
        return len(self.colors) - 1

    @property
    def span(self) -> int:
        """Largest color used (0 if nothing is colored)."""
        return max(self.colors[1:], default=0)

    def assigned(self) -> bool:
        return all(c > 0 for c in self.colors[1:])

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def reversed(self, k: int) -> "Coloring":
        """The mirror coloring v -> k+1-c(v) (uncolored stays uncolored)."""
        return Coloring([0] + [k + 1 - c if c else 0 for c in self.colors[1:]])


# ---------------------------------------------------------------------------
# classification


def _is_path_order(inst: BackboneInstance) -> bool:
    # backbone forms a single path visiting every vertex exactly once
    n = inst.n
    if n == 0 or len(inst.backbone) != n - 1:
        return False
    degs = [inst.backbone_degree(v) for v in range(1, n + 1)]
    if any(d > 2 for d in degs) or degs.count(1) != 2:
        return n == 1
    return _backbone_connected(inst)


def _backbone_connected(inst: BackboneInstance) -> bool:
    n = inst.n
    if n == 0:
        return True
    seen = [False] * (n + 1)
    stack = [1]
    seen[1] = True
    count = 0
    while stack:
        v = stack.pop()
        count += 1
        for w in inst.backbone_adj[v]:
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return count == n


def _backbone_acyclic(inst: BackboneInstance) -> bool:
    # union-find over backbone edges
    parent = list(range(inst.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in inst.backbone:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def classify_backbone(inst: BackboneInstance) -> Classification:
    """Most specific structural class of the backbone.

    Order of specificity: Matching, Galaxy, HamiltonianPath, SpanningTree,
    Forest, Generic.  A matching is also a galaxy and a forest; the most
    specific name wins.
    """
    spanning = inst.spanning
    degs = [inst.backbone_degree(v) for v in range(1, inst.n + 1)]
    if all(d <= 1 for d in degs):
        return Classification(BackboneClass.MATCHING, spanning)
    acyclic = _backbone_acyclic(inst)
    if acyclic:
        # galaxy: every component is a star = no backbone edge joins two
        # vertices that both have backbone degree >= 2
        is_galaxy = all(
            inst.backbone_degree(u) == 1 or inst.backbone_degree(v) == 1 for u, v in inst.backbone
        )
        if is_galaxy:
            return Classification(BackboneClass.GALAXY, spanning)
        if _is_path_order(inst):
            return Classification(BackboneClass.HAMILTONIAN_PATH, spanning)
        if len(inst.backbone) == inst.n - 1 and _backbone_connected(inst):
            return Classification(BackboneClass.SPANNING_TREE, spanning)
        return Classification(BackboneClass.FOREST, spanning)
    return Classification(BackboneClass.GENERIC, spanning)


# ---------------------------------------------------------------------------
# file format


def parse_instance(text: str) -> BackboneInstance:
    """Parse .bbc text into a BackboneInstance.

    Raises ValueError with a 1-based line number on malformed input.
    """
    n = None
    m_plain = m_backbone = 0
    plain: List[Edge] = []
    backbone: List[Edge] = []
    seen: Set[Edge] = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ValueError(f"line {ln}: repeated header")
            if len(parts) != 5 or parts[1] != "bbc":
                raise ValueError(f"line {ln}: malformed header (want 'p bbc n m_plain m_backbone')")
            try:
                n, m_plain, m_backbone = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise ValueError(f"line {ln}: malformed header (non-integer counts)") from None
            if n < 0 or m_plain < 0 or m_backbone < 0:
                raise ValueError(f"line {ln}: malformed header (negative counts)")
        elif parts[0] in ("e", "b"):
            if n is None:
                raise ValueError(f"line {ln}: edge before header")
            if len(parts) != 3:
                raise ValueError(f"line {ln}: malformed edge line")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ValueError(f"line {ln}: malformed edge line") from None
            if u == v:
                raise ValueError(f"line {ln}: self-loop at vertex {u}")
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise ValueError(f"line {ln}: vertex out of range 1..{n}")
            e = norm_edge(u, v)
            if e in seen:
                raise ValueError(f"line {ln}: duplicate edge ({e[0]},{e[1]})")
            seen.add(e)
            (plain if parts[0] == "e" else backbone).append(e)
        else:
            raise ValueError(f"line {ln}: unknown line type {parts[0]!r}")
    if n is None:
        raise ValueError("line 1: missing header")
    if len(plain) != m_plain or len(backbone) != m_backbone:
        raise ValueError(
            f"line 1: header declares {m_plain}+{m_backbone} edges, "
            f"found {len(plain)}+{len(backbone)}"
        )
    g = Graph(n, plain + backbone)
    return BackboneInstance(g, backbone)


def emit_instance(inst: BackboneInstance, comment: Optional[str] = None) -> str:
    """Serialize to .bbc text (edges sorted, so emit is canonical)."""
    out = []
    if comment:
        for part in comment.splitlines():
            out.append(f"c {part}")
    plain = sorted(inst.plain_edges)
    backbone = sorted(inst.backbone)
    out.append(f"p bbc {inst.n} {len(plain)} {len(backbone)}")
    out.extend(f"e {u} {v}" for u, v in plain)
    out.extend(f"b {u} {v}" for u, v in backbone)
    return "\n".join(out) + "\n"


def parse_coloring(text: str, n: int) -> Coloring:
    """Parse a coloring file (lines of '<vertex> <color>')."""
    c = Coloring.empty(n)
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {ln}: malformed coloring line")
        try:
            v, col = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {ln}: malformed coloring line") from None
        if not (1 <= v <= n):
            raise ValueError(f"line {ln}: vertex {v} out of range 1..{n}")
        if col < 0:
            raise ValueError(f"line {ln}: negative color {col}")
        c.colors[v] = col
    return c


def emit_coloring(coloring: Coloring, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        for part in comment.splitlines():
            out.append(f"c {part}")
    out.extend(f"{v} {coloring.colors[v]}" for v in range(1, coloring.n + 1))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# validation & verification


@dataclass
class ValidationReport:
    ok: bool
    findings: List[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate_instance(inst: BackboneInstance, max_degree: Optional[int] = None) -> ValidationReport:
    """Semantic checks that should not raise: reports findings instead."""
    findings = []
    for u, v in inst.backbone:
        if (u, v) not in inst.graph.edges:
            findings.append(f"backbone edge ({u},{v}) missing from graph")
    if max_degree is not None:
        for v in range(1, inst.n + 1):
            d = inst.graph.degree(v)
            if d > max_degree:
                findings.append(f"vertex {v} has degree {d} > {max_degree}")
    isolated = [v for v in range(1, inst.n + 1) if inst.graph.degree(v) == 0]
    if isolated and inst.n > 1:
        findings.append(f"{len(isolated)} isolated vertices (first: {isolated[0]})")
    if inst.lambda_hint is not None and inst.lambda_hint < 2:
        findings.append(f"lambda_hint {inst.lambda_hint} below 2")
    return ValidationReport(not findings, findings)


@dataclass
class Verdict:
    accepted: bool
    reason: Optional[str] = None
    edge: Optional[Edge] = None
    kind: Optional[str] = None  # "plain" | "backbone" | "uncolored"

    def __bool__(self):
        return self.accepted


def verify_coloring(inst: BackboneInstance, lam: int, coloring: Coloring) -> Verdict:
    """Check that coloring is a lambda-backbone coloring of the instance.

    Adjacent vertices must get different colors and backbone edges must
    differ by at least lam.  Every vertex must be colored (color >= 1).
    Reports the first violation in sorted edge order.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    if coloring.n != inst.n:
        raise ValueError(f"coloring covers {coloring.n} vertices, instance has {inst.n}")
    for v in range(1, inst.n + 1):
        if coloring.colors[v] <= 0:
            return Verdict(False, f"vertex {v} is uncolored", None, "uncolored")
    for u, v in sorted(inst.graph.edges):
        cu, cv = coloring.colors[u], coloring.colors[v]
        if (u, v) in inst.backbone:
            if abs(cu - cv) < lam:
                return Verdict(
                    False,
                    f"backbone edge ({u},{v}): |{cu}-{cv}| < {lam}",
                    (u, v),
                    "backbone",
                )
        elif cu == cv:
            return Verdict(False, f"edge ({u},{v}): both endpoints colored {cu}", (u, v), "plain")
    return Verdict(True)
