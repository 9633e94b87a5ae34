"""Command-line front end and random-instance generator.

Subcommands
-----------
solve     compute the smallest span and print a witness coloring
decide    test one (lambda, k) pair and print a witness on YES
verify    check a coloring file against an instance
classify  report the backbone class of an instance
reduce    compile a CNF formula into a backbone-coloring instance
gadget    build a gadget fragment or run one of its forcing checks
gen       generate a random instance with a prescribed backbone class
table     sweep the (lambda, k, backbone class) grid and report outcomes

Exit codes: 0 = YES / valid, 1 = NO / invalid, 2 = usage or I/O error,
3 = search budget exhausted.  Results go to standard output (or ``-o``),
diagnostics to standard error; ``--json`` switches the result to a
machine-readable schema.  The environment variable ``BBC_NODE_BUDGET``
overrides the default search budget wherever no ``--budget`` is given.

Randomness discipline: every generated object is a pure function of a
single 64-bit seed.  Derived seeds are the first eight bytes (big endian)
of SHA-256 over the decimal master seed joined with the derivation key,
and they feed ``random.Random`` (Mersenne Twister), of which only
``shuffle`` and ``randrange`` are used.  The same seed therefore yields
byte-identical output on every supported platform.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    BackboneClass,
    BackboneInstance,
    Coloring,
    Graph,
    classify_backbone,
    emit_coloring,
    emit_instance,
    parse_coloring,
    parse_instance,
    validate_instance,
)
from .constructive import best_constructive
from .gadgets import KIND_NAMES, LEMMA_SPECS, build_gadget, check_gadget_lemma, plan_aux_spine, wire
from .reductions import (
    CnfFormula,
    parse_cnf,
    reduce_3sat_to_path,
    reduce_3sat_to_tree,
    reduce_nae3sat_to_matching,
    reduce_nae4sat_to_galaxy,
)
from .solver import bbc_number, decide_bbc


class CliError(Exception):
    """Error with an explicit process exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# random instance generation
# ---------------------------------------------------------------------------

_CLASSES = ("matching", "galaxy", "path", "tree")

_CLASS_TARGET = {
    "matching": BackboneClass.MATCHING,
    "galaxy": BackboneClass.GALAXY,
    "path": BackboneClass.HAMILTONIAN_PATH,
    "tree": BackboneClass.SPANNING_TREE,
}

_CLASS_MIN_N = {"matching": 2, "galaxy": 3, "path": 4, "tree": 5}


@dataclass(frozen=True)
class GenSpec:
    """Prescription for one random instance.

    ``backbone`` is one of matching | galaxy | path | tree.  The backbone is
    built first (a perfect pairing, a partition into stars, a vertex order,
    or a random attachment tree), then roughly ``density * n`` extra
    non-backbone edges are added wherever the degree cap allows.
    """

    backbone: str
    n: int
    seed: int
    max_degree: int = 4
    density: float = 0.35

    def __post_init__(self) -> None:
        if self.backbone not in _CLASSES:
            raise ValueError(f"unknown backbone class {self.backbone!r}")
        if self.n < _CLASS_MIN_N[self.backbone]:
            raise ValueError(
                f"{self.backbone} backbone needs at least "
                f"{_CLASS_MIN_N[self.backbone]} vertices")
        if self.backbone == "matching" and self.n % 2:
            raise ValueError("a perfect matching backbone needs an even vertex count")
        if self.backbone == "tree" and self.max_degree < 3:
            raise ValueError("a tree backbone distinct from paths and stars needs degree cap >= 3")
        if self.max_degree < 2:
            raise ValueError("degree cap below 2 leaves no room for any backbone")
        if self.density < 0:
            raise ValueError("density must be non-negative")


def derive_seed(master: int, *parts: object) -> int:
    """Stable 64-bit sub-seed: SHA-256 of the master seed and a key."""
    text = ":".join([str(master)] + [str(p) for p in parts])
    return int.from_bytes(hashlib.sha256(text.encode("ascii")).digest()[:8], "big")


def _matching_backbone(rng: random.Random, n: int) -> List[Tuple[int, int]]:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return [(order[i], order[i + 1]) for i in range(0, n, 2)]


def _galaxy_backbone(rng: random.Random, n: int, cap: int) -> List[Tuple[int, int]]:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges: List[Tuple[int, int]] = []
    i = 0
    first = True
    while i < n:
        left = n - i
        lo = 3 if first else 2  # the first star gets two leaves so the
        hi = min(cap + 1, left)  # whole backbone cannot be a matching
        if hi < lo:
            raise ValueError("cannot partition the vertices into stars under the degree cap")
        size = rng.randrange(lo, hi + 1)
        if left - size == 1:  # never strand a single vertex
            size = size + 1 if size + 1 <= hi else size - 1
            if size < lo:
                raise ValueError("cannot partition the vertices into stars under the degree cap")
        center = order[i]
        for leaf in order[i + 1:i + size]:
            edges.append((center, leaf))
        i += size
        first = False
    return edges


def _path_backbone(rng: random.Random, n: int) -> List[Tuple[int, int]]:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return [(order[i], order[i + 1]) for i in range(n - 1)]


def _tree_backbone(rng: random.Random, n: int, cap: int) -> List[Tuple[int, int]]:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    deg = {v: 0 for v in order}
    edges: List[Tuple[int, int]] = []
    for i in range(1, n):
        slots = [v for v in order[:i] if deg[v] < cap]
        parent = slots[rng.randrange(len(slots))]
        child = order[i]
        edges.append((parent, child))
        deg[parent] += 1
        deg[child] += 1
    return edges


def gen_random_instance(spec: GenSpec) -> BackboneInstance:
    """Build a random instance whose backbone classifies as requested.

    Deterministic under ``spec.seed``: one ``random.Random`` stream drives
    backbone construction, extra-edge placement, and any resampling (a
    random attachment tree occasionally degenerates into a path or star
    and is rebuilt from the same stream).
    """
    rng = random.Random(spec.seed & 0xFFFFFFFFFFFFFFFF)
    want = _CLASS_TARGET[spec.backbone]
    for _ in range(1000):
        if spec.backbone == "matching":
            bb = _matching_backbone(rng, spec.n)
        elif spec.backbone == "galaxy":
            bb = _galaxy_backbone(rng, spec.n, spec.max_degree)
        elif spec.backbone == "path":
            bb = _path_backbone(rng, spec.n)
        else:
            bb = _tree_backbone(rng, spec.n, spec.max_degree)
        g = Graph(spec.n)
        for u, v in bb:
            g.add_edge(u, v)
        for _ in range(int(round(spec.density * spec.n))):
            u = rng.randrange(1, spec.n + 1)
            v = rng.randrange(1, spec.n + 1)
            if u == v or g.has_edge(u, v):
                continue
            if g.degree(u) >= spec.max_degree or g.degree(v) >= spec.max_degree:
                continue
            g.add_edge(u, v)
        inst = BackboneInstance(g, bb)
        cls = classify_backbone(inst)
        if cls.kind == want and cls.spanning:
            return inst
    raise ValueError(f"could not realize a {spec.backbone} backbone for n={spec.n}")


# ---------------------------------------------------------------------------
# outcome table over the (lambda, k, backbone class) grid
# ---------------------------------------------------------------------------

# Cell kinds: "always" cells are claimed colorable for every instance of the
# class at that k (never record NO there); "always-nc" is the same claim
# delivered without an efficient construction; "npc" cells are exactly the
# hard decision diagonals and get one YES and one NO exhibit each; "poly"
# cells are decidable cheaply but mixed in outcome; "open" cells carry no
# claim; "subsumed" cells sit above an "always" bound and need no work.

@dataclass(frozen=True)
class CellSpec:
    lam: int
    k: int
    klass: str
    kind: str
    note: str = ""

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.lam, self.k, _CLASSES.index(self.klass))


@dataclass
class CellResult:
    lam: int
    k: int
    klass: str
    kind: str
    note: str
    samples: int
    yes: int
    no: int
    unknown: int
    status: str
    nodes: int
    contradictions: List[str] = field(default_factory=list)
    witnesses: List[dict] = field(default_factory=list)

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.lam, self.k, _CLASSES.index(self.klass))

    def line(self) -> str:
        out = (f"lam={self.lam} k={self.k} class={self.klass:<8} kind={self.kind:<9} "
               f"status={self.status:<16} yes={self.yes} no={self.no} "
               f"unknown={self.unknown} samples={self.samples} nodes={self.nodes}")
        if self.contradictions:
            out += "  CONTRADICTION"
        return out


@dataclass
class TableReport:
    """Outcome sweep over the complexity grid.

    Invariant: a cell of kind "always"/"always-nc" must never record a NO;
    any such observation lands in ``contradictions`` and fails the run.
    Budget exhaustion marks the affected cell "unknown", never a pass.
    """

    lambdas: Tuple[int, ...]
    sizes: Tuple[int, ...]
    seeds: Tuple[int, ...]
    budget: Optional[int]
    cells: List[CellResult]
    elapsed: float

    @property
    def contradictions(self) -> List[str]:
        return [msg for c in self.cells for msg in c.contradictions]

    @property
    def unknown_cells(self) -> List[CellResult]:
        return [c for c in self.cells if c.status == "unknown"]

    def lines(self) -> List[str]:
        out = [c.line() for c in sorted(self.cells, key=lambda c: c.key)]
        out.append(f"cells={len(self.cells)} contradictions={len(self.contradictions)} "
                   f"unknown={len(self.unknown_cells)} elapsed={self.elapsed:.1f}s")
        return out

    def to_jsonable(self) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "sizes": list(self.sizes),
            "seeds": list(self.seeds),
            "budget": self.budget,
            "elapsed": self.elapsed,
            "contradictions": self.contradictions,
            "cells": [
                {
                    "lam": c.lam, "k": c.k, "class": c.klass, "kind": c.kind,
                    "note": c.note, "status": c.status, "samples": c.samples,
                    "yes": c.yes, "no": c.no, "unknown": c.unknown,
                    "nodes": c.nodes, "contradictions": c.contradictions,
                    "witnesses": c.witnesses,
                }
                for c in sorted(self.cells, key=lambda c: c.key)
            ],
        }


def table_cells(lam: int) -> List[CellSpec]:
    """The claimed decision landscape for one lambda, as (k, class) cells.

    Rows are indexed by the offset k - lambda.  Small lambda values have
    their own shapes; from lambda >= 4 on the shape is uniform.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    if lam == 2:
        rows = {
            1: ("poly", "poly", "poly", "poly"),
            2: ("npc", "npc", "poly", "poly"),
            3: ("always:2λ+1", "open", "open", "open"),
            4: ("subsumed", "always:2λ+2", "always:λ+4", "always:2λ+2"),
        }
    elif lam == 3:
        rows = {
            1: ("poly", "poly", "poly", "poly"),
            2: ("npc", "npc", "poly", "poly"),
            3: ("always:λ+3", "npc", "npc", "npc"),
            4: ("subsumed", "always:λ+4", "always-nc:λ+4", "open"),
            5: ("subsumed", "subsumed", "subsumed", "always:2λ+2"),
        }
    else:
        rows = {
            1: ("poly", "poly", "poly", "poly"),
            2: ("npc", "npc", "poly", "poly"),
            3: ("always:λ+3", "npc", "npc", "npc"),
            4: ("subsumed", "always:λ+4", "always-nc:λ+4", "npc"),
            5: ("subsumed", "subsumed", "subsumed", "open"),
            6: ("subsumed", "subsumed", "subsumed", "always:λ+6"),
        }
    cells = []
    for off in sorted(rows):
        for klass, tag in zip(_CLASSES, rows[off]):
            kind, _, note = tag.partition(":")
            cells.append(CellSpec(lam, lam + off, klass, kind, note))
    return cells


def _fit_n(klass: str, n: int) -> int:
    n = max(n, _CLASS_MIN_N[klass])
    if klass == "matching" and n % 2:
        n += 1
    return n


def _build_instance(n: int, bb: Sequence[Tuple[int, int]],
                    plain: Sequence[Tuple[int, int]]) -> BackboneInstance:
    g = Graph(n)
    for u, v in bb:
        g.add_edge(u, v)
    for u, v in plain:
        g.add_edge(u, v)
    return BackboneInstance(g, bb)


def _tight_star_pair() -> Tuple[BackboneInstance, BackboneInstance]:
    """Star with three leaves; the leaf triangle kills k = lambda + 2.

    Every color leaves at most two colors at distance >= lambda inside a
    palette of lambda + 2, so three mutually adjacent leaves cannot be
    colored (NO); dropping one triangle edge admits a coloring (YES).
    """
    bb = [(1, 2), (1, 3), (1, 4)]
    no = _build_instance(4, bb, [(2, 3), (3, 4), (2, 4)])
    yes = _build_instance(4, bb, [(2, 3), (3, 4)])
    return yes, no


def _tight_path_pair(pendant: bool) -> Tuple[BackboneInstance, BackboneInstance]:
    """Backbone path on 11 vertices; three skip edges squeeze v2/v6/v10.

    At k = lambda + 3 the palette splits into low {1,2,3} and high
    {lambda+1..lambda+3} halves and backbone neighbors take opposite
    halves.  Each skip edge {v-1, v+1} forces the middle vertex away from
    the extreme value of its half, so the triangle {v2, v6, v10} needs
    three distinct values from a two-value pool: NO.  Dropping one
    triangle edge admits a coloring: YES.  With ``pendant`` a twelfth
    vertex hangs off v4 by a backbone edge, turning the path into a tree
    without touching the argument.
    """
    n = 12 if pendant else 11
    bb = [(i, i + 1) for i in range(1, 11)]
    if pendant:
        bb.append((4, 12))
    skips = [(1, 3), (5, 7), (9, 11)]
    no = _build_instance(n, bb, skips + [(2, 6), (6, 10), (2, 10)])
    yes = _build_instance(n, bb, skips + [(2, 6), (6, 10)])
    return yes, no


def _forced_port_tree_pair(lam: int) -> Tuple[BackboneInstance, BackboneInstance]:
    """Two port-forcing tree fragments bridged by one plain edge.

    At k = lambda + 4 each fragment pins its u3 port to a single color
    determined by the parity of its anchors on the auxiliary spine.  Two
    fragments of equal parity pin both ports to the same color, so the
    plain bridge u3-u3 is unsatisfiable (NO); giving the second fragment
    the mirrored build flips its pinned color and the bridge relaxes (YES).
    """
    def assemble(second: str) -> BackboneInstance:
        frags = [build_gadget("FLambdaPlus4", lam), build_gadget(second, lam)]
        refs: List[Tuple[int, str]] = []
        leafspec: List[str] = []
        for fi, frag in enumerate(frags):
            for port, parity in frag.anchors:
                refs.append((fi, port))
                leafspec.append(parity)
        aux_idx = len(frags)
        frags.append(build_gadget("AuxBackboneTree", lam, leafspec=tuple(leafspec)))
        joins = []
        for (fi, port), d in zip(refs, plan_aux_spine(leafspec)):
            spine = "r" if d == 0 else f"p{d}"
            joins.append(((aux_idx, spine), (fi, port), True))
        joins.append(((0, "u3"), (1, "u3"), False))
        return wire(frags, joins)

    return assemble("F1"), assemble("FLambdaPlus4")


def _npc_exhibits(klass: str, lam: int, k: int) -> List[Tuple[str, BackboneInstance, str]]:
    """One YES and one NO exhibit for a hard cell, smallest first."""
    off = k - lam
    if klass == "matching" and off == 2:
        yes = reduce_nae3sat_to_matching(CnfFormula(3, [(1, 2, 3)]), lam).instance
        no = reduce_nae3sat_to_matching(CnfFormula(1, [(1, 1, 1)]), lam).instance
    elif klass == "galaxy" and off == 2:
        yes, no = _tight_star_pair()
    elif klass == "galaxy" and off == 3:
        yes = reduce_nae4sat_to_galaxy(CnfFormula(4, [(1, 2, 3, 4)]), lam).instance
        no = reduce_nae4sat_to_galaxy(CnfFormula(1, [(1, 1, 1, 1)]), lam).instance
    elif klass == "path" and off == 3:
        yes, no = _tight_path_pair(pendant=False)
    elif klass == "tree" and off == 3:
        yes, no = _tight_path_pair(pendant=True)
    elif klass == "tree" and off == 4:
        yes, no = _forced_port_tree_pair(lam)
    else:
        raise ValueError(f"no exhibit recipe for class={klass} k=lambda+{off}")
    return [("yes-exhibit", yes, "YES"), ("no-exhibit", no, "NO")]


def _run_cell(spec: CellSpec, sizes: Sequence[int], seeds: Sequence[int],
              budget: Optional[int]) -> CellResult:
    """Evaluate one grid cell; pure function of its arguments."""
    res = CellResult(spec.lam, spec.k, spec.klass, spec.kind, spec.note,
                     samples=0, yes=0, no=0, unknown=0, status="", nodes=0)
    if spec.kind == "subsumed":
        res.status = "subsumed"
        return res

    if spec.kind == "npc":
        for tag, inst, expect in _npc_exhibits(spec.klass, spec.lam, spec.k):
            coloring, stats = decide_bbc(inst, spec.lam, spec.k, budget=budget)
            res.samples += 1
            res.nodes += stats.nodes
            witness = {"tag": tag, "n": inst.n, "outcome": stats.outcome,
                       "nodes": stats.nodes}
            if stats.outcome == "YES":
                res.yes += 1
                witness["coloring"] = coloring.colors[1:]
            elif stats.outcome == "NO":
                res.no += 1
            else:
                res.unknown += 1
            if stats.outcome not in ("UNKNOWN", expect):
                res.contradictions.append(
                    f"lam={spec.lam} k={spec.k} {spec.klass}: {tag} decided {stats.outcome}")
            res.witnesses.append(witness)
    else:
        for n0 in sizes:
            n = _fit_n(spec.klass, n0)
            for s in seeds:
                iseed = derive_seed(s, spec.lam, spec.k, spec.klass, n)
                inst = gen_random_instance(GenSpec(spec.klass, n, seed=iseed))
                res.samples += 1
                witness = {"tag": f"n{n}-seed{s}", "n": n}
                outcome = None
                if spec.kind in ("always", "always-nc"):
                    try:
                        coloring, label = best_constructive(inst, spec.lam)
                        if (coloring.span <= spec.k
                                and verify_ok(inst, spec.lam, coloring)):
                            outcome = "YES"
                            witness["via"] = label
                            witness["coloring"] = coloring.colors[1:]
                    except ValueError:
                        pass
                if outcome is None:
                    coloring, stats = decide_bbc(inst, spec.lam, spec.k, budget=budget)
                    res.nodes += stats.nodes
                    outcome = stats.outcome
                    witness["nodes"] = stats.nodes
                    if outcome == "YES":
                        witness["coloring"] = coloring.colors[1:]
                witness["outcome"] = outcome
                if outcome == "YES":
                    res.yes += 1
                elif outcome == "NO":
                    res.no += 1
                    if spec.kind in ("always", "always-nc"):
                        res.contradictions.append(
                            f"lam={spec.lam} k={spec.k} {spec.klass}: NO at the "
                            f"claimed bound {spec.note} (n={n}, seed={s})")
                else:
                    res.unknown += 1
                res.witnesses.append(witness)

    if res.unknown:
        res.status = "unknown"
    elif res.yes and res.no:
        res.status = "mixed"
    elif res.yes:
        res.status = "all-YES-observed"
    else:
        res.status = "all-NO-observed"
    return res


def verify_ok(inst: BackboneInstance, lam: int, coloring: Coloring) -> bool:
    from .core import verify_coloring
    return verify_coloring(inst, lam, coloring).accepted


def _cell_task(args: Tuple[CellSpec, Tuple[int, ...], Tuple[int, ...], Optional[int]]) -> CellResult:
    return _run_cell(*args)


def run_table(sizes: Sequence[int], seeds: Sequence[int], lambdas: Sequence[int],
              budget: Optional[int] = 5_000_000, jobs: int = 1,
              archive_dir: Optional[str] = None) -> TableReport:
    """Sweep every cell of the grid for the given lambdas.

    Cells are independent and may run in parallel (``jobs``); the report
    is always ordered by cell key (lambda, k, class), not completion time.
    """
    t0 = time.perf_counter()
    specs: List[CellSpec] = []
    for lam in sorted(set(lambdas)):
        specs.extend(table_cells(lam))
    specs.sort(key=lambda s: s.key)
    tasks = [(s, tuple(sizes), tuple(seeds), budget) for s in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_cell_task, tasks))
    else:
        cells = [_cell_task(t) for t in tasks]
    cells.sort(key=lambda c: c.key)
    report = TableReport(tuple(sorted(set(lambdas))), tuple(sizes), tuple(seeds),
                         budget, cells, time.perf_counter() - t0)
    if archive_dir:
        _archive_witnesses(report, archive_dir)
    return report


def _archive_witnesses(report: TableReport, archive_dir: str) -> None:
    root = Path(archive_dir)
    root.mkdir(parents=True, exist_ok=True)
    for cell in report.cells:
        if cell.kind != "npc":
            continue
        for tag, inst, _ in _npc_exhibits(cell.klass, cell.lam, cell.k):
            name = f"lam{cell.lam}-k{cell.k}-{cell.klass}-{tag}.bbc"
            (root / name).write_text(emit_instance(
                inst, comment=f"exhibit {tag} lam={cell.lam} k={cell.k} class={cell.klass}"))
        for witness in cell.witnesses:
            if "coloring" in witness:
                name = f"lam{cell.lam}-k{cell.k}-{cell.klass}-{witness['tag']}.coloring"
                colors = [0] + list(witness["coloring"])
                (root / name).write_text(emit_coloring(
                    Coloring(colors), comment=f"witness {witness['tag']}"))
    (root / "report.json").write_text(json.dumps(report.to_jsonable(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(2, f"cannot read {path}: {e}") from None


def _load_instance(path: str) -> BackboneInstance:
    try:
        return parse_instance(_read_text(path))
    except ValueError as e:
        raise CliError(2, f"{path}: {e}") from None


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as e:
            raise CliError(2, f"cannot write {out}: {e}") from None
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit(payload: dict, args: argparse.Namespace) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    try:
        span, coloring = bbc_number(inst, args.lam, budget=args.budget)
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    if args.json:
        print(json.dumps({"span": span, "lambda": args.lam,
                          "coloring": coloring.colors[1:]}))
    else:
        print(f"span {span}")
        _write_or_print(emit_coloring(coloring, comment=f"lambda={args.lam} span={span}"),
                        args.out)
    return 0


def cmd_decide(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    coloring, stats = decide_bbc(inst, args.lam, args.k, budget=args.budget)
    payload = {"outcome": stats.outcome, "lambda": args.lam, "k": args.k,
               "nodes": stats.nodes, "elapsed": round(stats.elapsed, 6)}
    if stats.outcome == "YES":
        payload["coloring"] = coloring.colors[1:]
        if args.json:
            print(json.dumps(payload))
        else:
            _write_or_print(emit_coloring(
                coloring, comment=f"lambda={args.lam} k={args.k}"), args.out)
        return 0
    if args.json:
        print(json.dumps(payload))
    else:
        print(f"{stats.outcome} (lambda={args.lam}, k={args.k}, {stats.nodes} nodes)")
    return 1 if stats.outcome == "NO" else 3


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    from .core import verify_coloring
    try:
        coloring = parse_coloring(_read_text(args.coloring), inst.n)
    except ValueError as e:
        raise CliError(2, f"{args.coloring}: {e}") from None
    verdict = verify_coloring(inst, args.lam, coloring)
    payload = {"valid": verdict.accepted, "lambda": args.lam}
    if verdict.accepted:
        payload["span"] = coloring.span
        if args.json:
            print(json.dumps(payload))
        else:
            print(f"valid (lambda={args.lam}, span={coloring.span})")
        return 0
    payload.update({"reason": verdict.reason, "kind": verdict.kind,
                    "edge": list(verdict.edge) if verdict.edge else None})
    if args.json:
        print(json.dumps(payload))
    else:
        print(f"invalid ({verdict.kind}): {verdict.reason}")
    return 1


def cmd_classify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    cls = classify_backbone(inst)
    report = validate_instance(inst, max_degree=None)
    if args.json:
        print(json.dumps({"class": cls.kind.value, "spanning": cls.spanning,
                          "n": inst.n, "edges": len(inst.graph.edges),
                          "backbone_edges": len(inst.backbone),
                          "max_degree": inst.graph.max_degree,
                          "valid": report.ok}))
    else:
        print(f"{cls.kind.value} spanning={'yes' if cls.spanning else 'no'} "
              f"n={inst.n} max_degree={inst.graph.max_degree}")
    return 0


_REDUCERS = {
    ("nae3", "matching"): reduce_nae3sat_to_matching,
    ("nae4", "galaxy"): reduce_nae4sat_to_galaxy,
    ("3sat", "path"): reduce_3sat_to_path,
    ("3sat", "tree"): reduce_3sat_to_tree,
}


def cmd_reduce(args: argparse.Namespace) -> int:
    reducer = _REDUCERS.get((getattr(args, "from"), args.target))
    if reducer is None:
        raise CliError(2, f"--from {getattr(args, 'from')} cannot target {args.target}; "
                          "supported: nae3->matching, nae4->galaxy, 3sat->path|tree")
    try:
        formula = parse_cnf(_read_text(args.cnf))
    except ValueError as e:
        raise CliError(2, f"{args.cnf}: {e}") from None
    try:
        red = reducer(formula, args.lam)
    except ValueError as e:
        raise CliError(2, str(e)) from None
    cert = red.certificate
    if args.out:
        Path(args.out).write_text(emit_instance(
            red.instance,
            comment=f"reduced {getattr(args, 'from')} -> {args.target} lambda={args.lam}"))
    else:
        sys.stdout.write(emit_instance(red.instance))
    if args.cert:
        Path(args.cert).write_text(cert.to_json())
    if args.json:
        print(json.dumps({"target": cert.target, "lambda": cert.lam, "k": cert.k,
                          "n": cert.size, "variables": cert.num_vars,
                          "clauses": len(red.formula.clauses),
                          "out": args.out, "cert": args.cert}))
    elif args.out:
        print(f"reduced: target={cert.target} lambda={cert.lam} k={cert.k} "
              f"n={cert.size} -> {args.out}")
    return 0


def cmd_gadget(args: argparse.Namespace) -> int:
    if not args.check and not args.name:
        raise CliError(2, "gadget: need --name to build or --check to run a check")
    if args.check:
        if args.check not in LEMMA_SPECS:
            raise CliError(2, f"unknown check id {args.check!r}; "
                              f"known: {', '.join(sorted(LEMMA_SPECS))}")
        spec_kind = LEMMA_SPECS[args.check].kind
        if args.name and args.name != spec_kind:
            raise CliError(2, f"check {args.check} exercises gadget {spec_kind}, "
                              f"not {args.name}")
        try:
            report = check_gadget_lemma(args.check, args.lam, mode=args.mode,
                                        budget=args.budget)
        except RuntimeError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
        if args.json:
            print(json.dumps({"check": report.lemma, "lambda": report.lam,
                              "mode": report.mode, "k": report.k,
                              "verdict": report.verdict, "count": report.count,
                              "ports": list(report.ports),
                              "projected": [list(t) for t in report.projected],
                              "expected": [list(t) for t in report.expected]}))
        else:
            print(report)
        return {"Pass": 0, "Fail": 1}.get(report.verdict, 3)
    try:
        leafspec = tuple(args.leafspec.split(",")) if args.leafspec else None
        frag = build_gadget(args.name, args.lam, param=args.param, leafspec=leafspec)
    except ValueError as e:
        raise CliError(2, str(e)) from None
    ports = ", ".join(f"{name}={v}" for name, v in sorted(frag.ports.items()))
    if args.json:
        print(json.dumps({"kind": args.name, "lambda": args.lam, "n": frag.instance.n,
                          "ports": frag.ports,
                          "anchors": [list(a) for a in frag.anchors]}))
    else:
        _write_or_print(emit_instance(frag.instance,
                                      comment=f"gadget {args.name} ports: {ports}"),
                        args.out)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        spec = GenSpec(getattr(args, "class"), args.n, args.seed,
                       max_degree=args.max_degree, density=args.density)
        inst = gen_random_instance(spec)
    except ValueError as e:
        raise CliError(2, str(e)) from None
    comment = (f"gen class={spec.backbone} n={spec.n} seed={spec.seed} "
               f"density={spec.density} max_degree={spec.max_degree}")
    if args.json:
        print(json.dumps({"class": spec.backbone, "n": inst.n, "seed": spec.seed,
                          "edges": len(inst.graph.edges),
                          "backbone_edges": len(inst.backbone),
                          "text": emit_instance(inst, comment=comment)}))
    else:
        _write_or_print(emit_instance(inst, comment=comment), args.out)
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    lambdas = _parse_int_list(args.lambdas, "--lambdas")
    sizes = _parse_int_list(args.sizes, "--sizes")
    if args.samples < 1:
        raise CliError(2, "--samples must be at least 1")
    seeds = [derive_seed(args.seed, "sample", i) for i in range(args.samples)]
    report = run_table(sizes, seeds, lambdas, budget=args.budget,
                       jobs=args.jobs, archive_dir=args.archive)
    if args.out:
        Path(args.out).write_text(json.dumps(report.to_jsonable(), indent=2) + "\n")
    if args.json:
        print(json.dumps(report.to_jsonable(), indent=2))
    else:
        for line in report.lines():
            print(line)
    for msg in report.contradictions:
        print(f"contradiction: {msg}", file=sys.stderr)
    if report.contradictions:
        return 1
    if report.unknown_cells:
        return 3
    return 0


def _parse_int_list(text: str, flag: str) -> List[int]:
    try:
        values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise CliError(2, f"{flag} expects a comma-separated integer list") from None
    if not values:
        raise CliError(2, f"{flag} expects at least one value")
    return values


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbc",
        description="Backbone coloring toolkit: exact and constructive solvers, "
                    "gadget checks, CNF reductions, instance generation, and a "
                    "complexity-grid sweep.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, lam=False, budget=False,
                   instance=False, out=False) -> None:
        if lam:
            p.add_argument("--lambda", dest="lam", type=int, required=True,
                           help="backbone separation parameter (>= 2)")
        if budget:
            p.add_argument("--budget", type=int, default=None,
                           help="search node budget (default: BBC_NODE_BUDGET or unlimited)")
        if instance:
            p.add_argument("-i", "--instance", required=True, help="instance file")
        if out:
            p.add_argument("-o", "--out", default=None, help="write result here instead of stdout")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("solve", help="minimize the span and print a witness")
    add_common(p, lam=True, budget=True, instance=True, out=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decide", help="decide one (lambda, k) pair")
    add_common(p, lam=True, budget=True, instance=True, out=True)
    p.add_argument("--k", type=int, required=True, help="number of available colors")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="check a coloring file against an instance")
    add_common(p, lam=True, instance=True)
    p.add_argument("--coloring", required=True, help="coloring file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="report the backbone class")
    add_common(p, instance=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce", help="compile a CNF formula into an instance")
    p.add_argument("--from", choices=("nae3", "nae4", "3sat"), required=True,
                   help="formula interpretation")
    p.add_argument("--target", choices=_CLASSES, required=True,
                   help="backbone class of the produced instance")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--cnf", required=True, help="DIMACS CNF input file")
    p.add_argument("--out", default=None, help="instance output file")
    p.add_argument("--cert", default=None, help="decoding certificate output file (JSON)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gadget", help="build a gadget or run a forcing check")
    p.add_argument("--name", choices=sorted(KIND_NAMES), default=None,
                   help="gadget family to build")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--check", default=None, help="forcing check id (L1..L9, C1, C2)")
    p.add_argument("--mode", choices=("full", "skeleton"), default="full",
                   help="check the full gadget or its reduced skeleton")
    p.add_argument("--param", type=int, default=None,
                   help="size parameter for parameterized families")
    p.add_argument("--leafspec", default=None,
                   help="comma-separated parities for the auxiliary spine")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--class", choices=_CLASSES, required=True,
                   help="backbone class of the generated instance")
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--seed", type=int, required=True, help="64-bit master seed")
    p.add_argument("--density", type=float, default=0.35,
                   help="extra plain edges per vertex (default 0.35)")
    p.add_argument("--max-degree", type=int, default=4,
                   help="degree cap (default 4)")
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("table", help="sweep the (lambda, k, class) outcome grid")
    p.add_argument("--lambdas", default="2,3,4", help="comma-separated lambda values")
    p.add_argument("--sizes", default="8,12,16", help="comma-separated instance sizes")
    p.add_argument("--samples", type=int, default=2, help="random samples per cell size")
    p.add_argument("--seed", type=int, default=20260815, help="64-bit master seed")
    p.add_argument("--budget", type=int, default=5_000_000,
                   help="search node budget per decision (default 5000000)")
    p.add_argument("--jobs", type=int, default=1, help="parallel cell workers")
    p.add_argument("--archive", default=None, help="directory for witness files")
    p.add_argument("-o", "--out", default=None, help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_table)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except BrokenPipeError:
        return 2
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3 if "budget" in str(e).lower() else 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
