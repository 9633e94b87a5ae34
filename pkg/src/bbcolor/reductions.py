"""Reductions from satisfiability problems to backbone-coloring decisions.

Four reductions, one per hard backbone class (palette size k, so the
formula is satisfiable iff the produced instance has a lambda-backbone
k-coloring):

    reduce_nae3sat_to_matching   monotone NAE-3-SAT -> matching,   k = lambda+2
    reduce_nae4sat_to_galaxy     monotone NAE-4-SAT -> galaxy,     k = lambda+3 (lambda >= 3)
    reduce_3sat_to_path          3-SAT           -> Hamiltonian path, k = lambda+3 (lambda >= 3)
    reduce_3sat_to_tree          3-SAT           -> spanning tree,  k = lambda+4 (lambda >= 4)

The NAE reductions require monotone formulas (no negated literals); the
3-SAT reductions normalize their input first (see normalize_3sat).

Each reduction returns a Reduction: the instance, a JSON-serializable
ReductionCertificate describing how to read an assignment off a coloring,
and an in-memory layout that assignment_to_coloring uses to turn a
satisfying assignment into a verified coloring of the whole instance.

Certificate JSON schema (all keys always present):

    {
      "target": "matching" | "galaxy" | "path" | "tree",
      "lam": int, "k": int,          # decision: satisfiable <=> BBC <= k
      "num_vars": int,               # original variable count
      "size": int,                   # instance vertex count
      "probes": {"<var>": vertex},   # per (normalized) variable
      "true_color": int,             # probe color meaning "true" ...
      "reference": vertex | 0,       # ... after mirror normalization:
      "reference_low": [colors],     # if reference color not here, apply
      "mirror_sum": int,             # c -> mirror_sum - c to all colors
      "flipped": [vars],             # variables decoded inverted
      "clause_anchors": [[vertex, ...], ...]
    }
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .core import BackboneInstance, Coloring, verify_coloring
from .gadgets import GadgetFragment, build_gadget, plan_aux_spine, wire


# ---------------------------------------------------------------------------
# CNF formulas
# ---------------------------------------------------------------------------

Clause = Tuple[int, ...]


@dataclass(frozen=True)
class CnfFormula:
    """CNF with DIMACS-style literals: variable i is i, its negation -i."""

    num_vars: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        for ci, clause in enumerate(self.clauses, start=1):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {ci}: literal {lit} out of range")

    def __str__(self):
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in cl) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"


def parse_cnf(text: str) -> CnfFormula:
    """Parse DIMACS CNF; raises ValueError with the offending line number."""
    num_vars = None
    declared = None
    clauses: List[Clause] = []
    pending: List[int] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ValueError(f"line {ln}: duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {ln}: malformed problem line {line!r}")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"line {ln}: non-numeric problem line") from None
            continue
        if num_vars is None:
            raise ValueError(f"line {ln}: clause before problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {ln}: bad literal {tok!r}") from None
            if lit == 0:
                if not pending:
                    raise ValueError(f"line {ln}: empty clause")
                clauses.append(tuple(pending))
                pending.clear()
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"line {ln}: literal {lit} exceeds "
                                     f"{num_vars} variables")
                pending.append(lit)
    if pending:
        clauses.append(tuple(pending))
    if num_vars is None:
        raise ValueError("missing problem line")
    if declared is not None and declared != len(clauses):
        raise ValueError(f"problem line declares {declared} clauses, "
                         f"found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def _clause_ok(clause: Clause, phi: Dict[int, bool], nae: bool) -> bool:
    values = [phi[abs(l)] == (l > 0) for l in clause]
    if nae:
        return any(values) and not all(values)
    return any(values)


def brute_force_sat(formula: CnfFormula, nae: bool = False
                    ) -> Optional[Dict[int, bool]]:
    """Smallest satisfying assignment by counting: assignment m maps
    variable i to bit i-1 of m.  Returns None if unsatisfiable."""
    n = formula.num_vars
    for m in range(1 << n):
        phi = {i: bool((m >> (i - 1)) & 1) for i in range(1, n + 1)}
        if all(_clause_ok(cl, phi, nae) for cl in formula.clauses):
            return phi
    return None


def normalize_3sat(formula: CnfFormula) -> Tuple[CnfFormula, Tuple[int, ...]]:
    """Rewrite a CNF with clauses of up to three literals into an
    equisatisfiable form the path/tree reductions accept: every clause has
    three literals over three distinct variables, and every variable has a
    positive occurrence.

    Steps: pad short clauses by repetition, drop tautologies, split a
    repeated literal (l|l|y) into (l|y|z) and (l|y|~z) with a fresh z, and
    flip variables that only occur negated.  Returns the new formula and
    the tuple of flipped variables (their decoded value is inverted).
    """
    work: List[Clause] = []
    for ci, clause in enumerate(formula.clauses, start=1):
        if not 1 <= len(clause) <= 3:
            raise ValueError(f"clause {ci} has {len(clause)} literals; "
                             "need between 1 and 3")
        cl = tuple(clause)
        while len(cl) < 3:
            cl = cl + (cl[-1],)
        work.append(cl)
    num_vars = formula.num_vars

    out: List[Clause] = []
    queue = list(work)
    while queue:
        cl = queue.pop(0)
        if any(-l in cl for l in cl):
            continue  # tautology
        dup = next((l for l in cl if cl.count(l) > 1), None)
        if dup is None:
            out.append(cl)
            continue
        rest = [l for l in cl if l != dup]
        other = rest[0] if rest else dup
        if not rest:
            # (l|l|l): introduce a fresh variable and recurse
            num_vars += 1
            queue.append((dup, dup, num_vars))
            queue.append((dup, dup, -num_vars))
            continue
        num_vars += 1
        queue.append((dup, other, num_vars))
        queue.append((dup, other, -num_vars))

    flipped = tuple(sorted(
        v for v in range(1, num_vars + 1)
        if any(-v in cl for cl in out) and not any(v in cl for cl in out)))
    flip = set(flipped)
    final = tuple(tuple(-l if abs(l) in flip else l for l in cl) for cl in out)
    return CnfFormula(num_vars, final), flipped


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionCertificate:
    """How to decide and decode the produced instance (see module docstring
    for the JSON schema)."""

    target: str
    lam: int
    k: int
    num_vars: int
    size: int
    probes: Dict[int, int]
    true_color: int
    reference: int = 0
    reference_low: Tuple[int, ...] = ()
    mirror_sum: int = 0
    flipped: Tuple[int, ...] = ()
    clause_anchors: Tuple[Tuple[int, ...], ...] = ()

    def to_json(self) -> str:
        data = {
            "target": self.target,
            "lam": self.lam,
            "k": self.k,
            "num_vars": self.num_vars,
            "size": self.size,
            "probes": {str(v): p for v, p in sorted(self.probes.items())},
            "true_color": self.true_color,
            "reference": self.reference,
            "reference_low": list(self.reference_low),
            "mirror_sum": self.mirror_sum,
            "flipped": list(self.flipped),
            "clause_anchors": [list(a) for a in self.clause_anchors],
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReductionCertificate":
        data = json.loads(text)
        return cls(
            target=data["target"],
            lam=data["lam"],
            k=data["k"],
            num_vars=data["num_vars"],
            size=data["size"],
            probes={int(v): p for v, p in data["probes"].items()},
            true_color=data["true_color"],
            reference=data["reference"],
            reference_low=tuple(data["reference_low"]),
            mirror_sum=data["mirror_sum"],
            flipped=tuple(data["flipped"]),
            clause_anchors=tuple(tuple(a) for a in data["clause_anchors"]),
        )


@dataclass
class Reduction:
    """A built reduction: instance, decode certificate, and the bookkeeping
    needed to complete a satisfying assignment into a coloring."""

    instance: BackboneInstance
    certificate: ReductionCertificate
    formula: CnfFormula  # the formula actually encoded (normalized for 3-SAT)
    layout: Dict[str, object] = field(repr=False, default_factory=dict)


def extract_assignment(cert: ReductionCertificate,
                       coloring: Coloring) -> Dict[int, bool]:
    """Read the original variables' assignment off a coloring of the
    reduced instance (mirror-normalizing first when the certificate says)."""
    mirrored = (cert.reference != 0 and
                coloring[cert.reference] not in cert.reference_low)
    flip = set(cert.flipped)
    out = {}
    for var, probe in cert.probes.items():
        c = coloring[probe]
        if mirrored:
            c = cert.mirror_sum - c
        val = c == cert.true_color
        if var in flip:
            val = not val
        if var <= cert.num_vars:
            out[var] = val
    return out


# ---------------------------------------------------------------------------
# shared assembly helpers
# ---------------------------------------------------------------------------

def _offsets(frags: Sequence[GadgetFragment]) -> List[int]:
    offs, tot = [], 0
    for f in frags:
        offs.append(tot)
        tot += f.instance.graph.n
    return offs


def _require_monotone(formula: CnfFormula, width: int, problem: str) -> None:
    for ci, cl in enumerate(formula.clauses, start=1):
        if len(cl) != width:
            raise ValueError(f"{problem}: clause {ci} has {len(cl)} literals, "
                             f"need exactly {width}")
        neg = [l for l in cl if l < 0]
        if neg:
            raise ValueError(f"{problem}: clause {ci} contains negated "
                             f"literal {neg[0]}; monotone formulas only")


def _paint(colors: List[int], frag: GadgetFragment, off: int,
           port_colors: Dict[str, int]) -> None:
    for port, c in port_colors.items():
        colors[frag.ports[port] + off] = c


def _finish(red: Reduction, colors: List[int]) -> Coloring:
    coloring = Coloring(colors)
    verdict = verify_coloring(red.instance, red.certificate.lam, coloring)
    if not verdict:
        raise RuntimeError(f"completion produced an invalid coloring: "
                           f"{verdict.reason}")
    if coloring.span > red.certificate.k:
        raise RuntimeError(f"completion exceeded k={red.certificate.k}")
    return coloring


# ---------------------------------------------------------------------------
# matching: monotone NAE-3-SAT, k = lambda + 2
# ---------------------------------------------------------------------------

def _x_colors(lam: int, mirrored: bool) -> Dict[str, int]:
    base = {"v1": 1, "v2": 2, "v3": lam + 2, "v4": 1, "v5": lam + 1,
            "v6": lam + 2, "v7": 2, "v8": lam + 1, "v9": 2, "v10": lam + 2,
            "v11": lam + 2, "v12": 1}
    if mirrored:
        return {p: lam + 3 - c for p, c in base.items()}
    return base


def _y_colors(lam: int, state_true: bool) -> Dict[str, int]:
    # true state: (u1..u4) = (2, lam+2, 1, lam+1), first X mirrored,
    # second X in base colors; false state is the full mirror image.
    out = {}
    first = _x_colors(lam, mirrored=state_true)
    second = _x_colors(lam, mirrored=not state_true)
    out.update(first)
    out.update({p + "'": c for p, c in second.items()})
    u = (2, lam + 2, 1, lam + 1) if state_true else (lam + 1, 1, lam + 2, 2)
    for i, c in enumerate(u, start=1):
        out[f"u{i}"] = c
    return out


def reduce_nae3sat_to_matching(formula: CnfFormula, lam: int) -> Reduction:
    """Monotone NAE-3-SAT to backbone coloring with a perfect matching
    backbone at k = lambda + 2 (any lambda >= 2).

    Variable x_i becomes a chain of one Y gadget per occurrence (at least
    one); each clause becomes a triangle with three matched pendants, the
    pendant of literal t joined to u1 and u3 of the occurrence's Y copy.
    """
    if lam < 2:
        raise ValueError("lambda must be at least 2")
    _require_monotone(formula, 3, "NAE-3-SAT to matching")
    if formula.num_vars == 0:
        raise ValueError("formula has no variables")
    n = formula.num_vars
    occ = {v: 0 for v in range(1, n + 1)}
    for cl in formula.clauses:
        for lit in cl:
            occ[lit] += 1

    frags: List[GadgetFragment] = []
    var_copies: Dict[int, List[int]] = {}
    joins = []
    for v in range(1, n + 1):
        copies = []
        for _ in range(max(occ[v], 1)):
            copies.append(len(frags))
            frags.append(build_gadget("Y", lam))
        var_copies[v] = copies
        for a, b in zip(copies, copies[1:]):
            joins.append(((a, "u3"), (b, "u2"), False))

    clause_frags = []
    counter = {v: 0 for v in range(1, n + 1)}
    clause_wiring: List[List[int]] = []
    for cl in formula.clauses:
        ci = len(frags)
        clause_frags.append(ci)
        frags.append(build_gadget("MatchingClause", lam))
        wiring = []
        for t, lit in enumerate(cl, start=1):
            y = var_copies[lit][counter[lit]]
            counter[lit] += 1
            joins.append(((ci, f"b{t}"), (y, "u1"), False))
            joins.append(((ci, f"b{t}"), (y, "u3"), False))
            wiring.append(y)
        clause_wiring.append(wiring)

    inst = wire(frags, joins)
    offs = _offsets(frags)
    probes = {v: frags[c[0]].ports["u1"] + offs[c[0]]
              for v, c in var_copies.items()}
    anchors = tuple(
        tuple(frags[ci].ports[f"a{t}"] + offs[ci] for t in (1, 2, 3))
        for ci in clause_frags)
    cert = ReductionCertificate(
        target="matching", lam=lam, k=lam + 2, num_vars=n, size=inst.n,
        probes=probes, true_color=2, clause_anchors=anchors)
    layout = {"frags": frags, "offs": offs, "var_copies": var_copies,
              "clause_frags": clause_frags, "clause_wiring": clause_wiring}
    return Reduction(inst, cert, formula, layout)


def _complete_matching(red: Reduction, phi: Dict[int, bool]) -> Coloring:
    lam = red.certificate.lam
    frags, offs = red.layout["frags"], red.layout["offs"]
    colors = [0] * (red.instance.n + 1)
    for v, copies in red.layout["var_copies"].items():
        for ci in copies:
            _paint(colors, frags[ci], offs[ci], _y_colors(lam, phi[v]))
    true_ab = [(1, lam + 2), (2, lam + 2)]
    false_ab = [(lam + 1, 1), (lam + 2, 1)]
    for cl, ci in zip(red.formula.clauses, red.layout["clause_frags"]):
        ti = fi = 0
        for t, lit in enumerate(cl, start=1):
            if phi[lit]:
                a, b = true_ab[ti]
                ti += 1
            else:
                a, b = false_ab[fi]
                fi += 1
            colors[frags[ci].ports[f"a{t}"] + offs[ci]] = a
            colors[frags[ci].ports[f"b{t}"] + offs[ci]] = b
    return _finish(red, colors)


# ---------------------------------------------------------------------------
# galaxy: monotone NAE-4-SAT, k = lambda + 3
# ---------------------------------------------------------------------------

def _w_colors(lam: int, state_true: bool) -> Dict[str, int]:
    out = {"w": lam + 1}
    for b in (1, 2, 3):
        out[f"u{b}"] = 1
        out[f"v{b}"] = 1
        for t in (1, 2, 3):
            out[f"{b}.{t}"] = lam + t
    if state_true:
        return {p: lam + 4 - c for p, c in out.items()}
    return out


def reduce_nae4sat_to_galaxy(formula: CnfFormula, lam: int) -> Reduction:
    """Monotone NAE-4-SAT to backbone coloring with a spanning galaxy
    backbone at k = lambda + 3 (lambda >= 3).

    Variable x_i becomes a ring of 2*max(occ,1) W gadgets whose states
    alternate; odd copies carry the variable's value.  Each clause is a K4
    whose vertices hang by backbone edges off the v1 stars of the odd
    copies serving the occurrences.
    """
    if lam < 3:
        raise ValueError("lambda must be at least 3")
    _require_monotone(formula, 4, "NAE-4-SAT to galaxy")
    if formula.num_vars == 0:
        raise ValueError("formula has no variables")
    n = formula.num_vars
    occ = {v: 0 for v in range(1, n + 1)}
    for cl in formula.clauses:
        for lit in cl:
            occ[lit] += 1

    frags: List[GadgetFragment] = []
    var_frag: Dict[int, int] = {}
    var_k: Dict[int, int] = {}
    for v in range(1, n + 1):
        var_frag[v] = len(frags)
        var_k[v] = max(occ[v], 1)
        frags.append(build_gadget("GalaxyVariable", lam, param=var_k[v]))

    joins = []
    clause_frags = []
    counter = {v: 0 for v in range(1, n + 1)}
    clause_slots: List[List[Tuple[int, str]]] = []
    for cl in formula.clauses:
        ci = len(frags)
        clause_frags.append(ci)
        frags.append(build_gadget("GalaxyClause", lam))
        slots = []
        for t, lit in enumerate(cl, start=1):
            counter[lit] += 1
            port = f"v1.{2 * counter[lit] - 1}"
            joins.append(((ci, f"c{t}"), (var_frag[lit], port), True))
            slots.append((var_frag[lit], port))
        clause_slots.append(slots)

    inst = wire(frags, joins)
    offs = _offsets(frags)
    probes = {v: frags[fi].ports["v1.1"] + offs[fi]
              for v, fi in var_frag.items()}
    anchors = tuple(
        tuple(frags[ci].ports[f"c{t}"] + offs[ci] for t in (1, 2, 3, 4))
        for ci in clause_frags)
    cert = ReductionCertificate(
        target="galaxy", lam=lam, k=lam + 3, num_vars=n, size=inst.n,
        probes=probes, true_color=lam + 3, clause_anchors=anchors)
    layout = {"frags": frags, "offs": offs, "var_frag": var_frag,
              "var_k": var_k, "clause_frags": clause_frags}
    return Reduction(inst, cert, formula, layout)


def _complete_galaxy(red: Reduction, phi: Dict[int, bool]) -> Coloring:
    lam = red.certificate.lam
    frags, offs = red.layout["frags"], red.layout["offs"]
    colors = [0] * (red.instance.n + 1)
    for v, fi in red.layout["var_frag"].items():
        frag, off = frags[fi], offs[fi]
        for j in range(1, 2 * red.layout["var_k"][v] + 1):
            state = phi[v] if j % 2 == 1 else not phi[v]
            _paint(colors, frag, off,
                   {f"{p}.{j}": c for p, c in _w_colors(lam, state).items()})
    for cl, ci in zip(red.formula.clauses, red.layout["clause_frags"]):
        low, high = 1, lam + 1
        for t, lit in enumerate(cl, start=1):
            if phi[lit]:
                colors[frags[ci].ports[f"c{t}"] + offs[ci]] = low
                low += 1
            else:
                colors[frags[ci].ports[f"c{t}"] + offs[ci]] = high
                high += 1
    return _finish(red, colors)


# ---------------------------------------------------------------------------
# Hamiltonian path: 3-SAT, k = lambda + 3
# ---------------------------------------------------------------------------

def reduce_3sat_to_path(formula: CnfFormula, lam: int) -> Reduction:
    """3-SAT to backbone coloring with a Hamiltonian path backbone at
    k = lambda + 3 (lambda >= 3).

    The input is normalized first (see normalize_3sat).  Each variable
    becomes a comb gadget of max(occurrences, 2) eight-vertex periods, each
    clause a force gadget; everything is chained into one backbone path.
    The s-th occurrence of a variable wires the clause's force-gadget end
    into the matching pair of period s: the first pair for a positive
    literal, the second for a negated one, closing a seven-cycle whose
    colorability encodes the clause.
    """
    if lam < 3:
        raise ValueError("lambda must be at least 3")
    norm, flipped = normalize_3sat(formula)
    n = norm.num_vars
    if n == 0:
        raise ValueError("formula has no variables")
    occ = {v: 0 for v in range(1, n + 1)}
    for cl in norm.clauses:
        for lit in cl:
            occ[abs(lit)] += 1

    frags: List[GadgetFragment] = []
    var_frag: Dict[int, int] = {}
    var_t: Dict[int, int] = {}
    for v in range(1, n + 1):
        var_frag[v] = len(frags)
        var_t[v] = max(occ[v], 2)
        frags.append(build_gadget("PCM", lam, param=var_t[v]))

    joins = []
    for v in range(1, n):
        joins.append(((var_frag[v], f"v{8 * var_t[v]}"),
                      (var_frag[v + 1], "v1"), True))

    clause_frags = []
    counter = {v: 0 for v in range(1, n + 1)}
    clause_pairs: List[List[Tuple[int, str, str, int]]] = []
    for cl in norm.clauses:
        ci = len(frags)
        clause_frags.append(ci)
        frags.append(build_gadget("Force", lam))
        pairs = []
        for lit in cl:
            v = abs(lit)
            counter[v] += 1
            s = counter[v]
            if lit > 0:
                w1, w2 = f"v{8 * s - 6}", f"v{8 * s - 4}"
            else:
                w1, w2 = f"v{8 * s - 2}", f"v{8 * s}"
            pairs.append((var_frag[v], w1, w2, lit))
        # seven-cycle: u8 - p1 - p2 - p3 - u8 (pair insides are backbone-
        # path matching edges already present in the comb)
        joins.append(((ci, "u8"), (pairs[0][0], pairs[0][1]), False))
        joins.append(((pairs[0][0], pairs[0][2]), (pairs[1][0], pairs[1][1]), False))
        joins.append(((pairs[1][0], pairs[1][2]), (pairs[2][0], pairs[2][1]), False))
        joins.append(((pairs[2][0], pairs[2][2]), (ci, "u8"), False))
        clause_pairs.append(pairs)

    last_pcm = var_frag[n]
    if clause_frags:
        joins.append(((last_pcm, f"v{8 * var_t[n]}"), (clause_frags[0], "u1"), True))
        for a, b in zip(clause_frags, clause_frags[1:]):
            joins.append(((a, "u8"), (b, "u1"), True))

    inst = wire(frags, joins)
    offs = _offsets(frags)
    probes = {v: frags[fi].ports["v3"] + offs[fi] for v, fi in var_frag.items()}
    reference = frags[var_frag[1]].ports["v1"] + offs[var_frag[1]]
    anchors = tuple(
        (frags[ci].ports["u8"] + offs[ci],)
        + tuple(frags[fi].ports[w] + offs[fi] for fi, w1, w2, _l in pj
                for w in (w1, w2))
        for ci, pj in zip(clause_frags, clause_pairs))
    cert = ReductionCertificate(
        target="path", lam=lam, k=lam + 3, num_vars=formula.num_vars,
        size=inst.n, probes=probes, true_color=1, reference=reference,
        reference_low=(1, 2, 3), mirror_sum=lam + 4, flipped=flipped,
        clause_anchors=anchors)
    layout = {"frags": frags, "offs": offs, "var_frag": var_frag,
              "var_t": var_t, "clause_frags": clause_frags,
              "clause_pairs": clause_pairs}
    return Reduction(inst, cert, norm, layout)


def _complete_path(red: Reduction, phi: Dict[int, bool]) -> Coloring:
    lam = red.certificate.lam
    frags, offs = red.layout["frags"], red.layout["offs"]
    colors = [0] * (red.instance.n + 1)
    for v, fi in red.layout["var_frag"].items():
        frag, off = frags[fi], offs[fi]
        a = 1 if phi[v] else 2
        b = 3 - a
        for j in range(1, 2 * red.layout["var_t"][v] + 1):
            colors[frag.ports[f"v{4 * j - 3}"] + off] = 1
            colors[frag.ports[f"v{4 * j - 1}"] + off] = a if j % 2 == 1 else b
            colors[frag.ports[f"v{4 * j - 2}"] + off] = lam + 2
            colors[frag.ports[f"v{4 * j}"] + off] = lam + 3
    for ci in red.layout["clause_frags"]:
        frag, off = frags[ci], offs[ci]
        for port, c in (("u1", 1), ("u2", lam + 3), ("u3", 1), ("u4", lam + 2),
                        ("u5", 2), ("u6", lam + 3), ("u7", 3), ("u8", lam + 3)):
            colors[frag.ports[port] + off] = c
    # clause pairs: orient each pair's two colors around the seven-cycle
    for cl, pairs in zip(red.formula.clauses, red.layout["clause_pairs"]):
        sets = []
        verts = []
        for fi, w1, w2, lit in pairs:
            true = phi[abs(lit)] == (lit > 0)
            sets.append((lam + 1, lam + 2) if true else (lam + 2, lam + 3))
            verts.append((frags[fi].ports[w1] + offs[fi],
                          frags[fi].ports[w2] + offs[fi]))
        u8 = lam + 3
        for orient in itertools.product((0, 1), repeat=3):
            cs = [(sets[i][o], sets[i][1 - o]) for i, o in enumerate(orient)]
            if (cs[0][0] != u8 and cs[0][1] != cs[1][0]
                    and cs[1][1] != cs[2][0] and cs[2][1] != u8):
                for (va, vb), (ca, cb) in zip(verts, cs):
                    colors[va], colors[vb] = ca, cb
                break
        else:
            raise RuntimeError("no orientation for a satisfied clause")
    return _finish(red, colors)


# ---------------------------------------------------------------------------
# spanning tree: 3-SAT, k = lambda + 4
# ---------------------------------------------------------------------------

def _n4_colors(lam: int, v9: int) -> Dict[str, int]:
    return {"v1": 1, "v2": 2, "v3": 3, "v4": 4, "v5": lam + 2, "v6": 1,
            "v7": lam + 4, "v8": lam + 3, "v9": v9}


def _f4_colors(lam: int, mirrored: bool) -> Dict[str, int]:
    out = dict(_n4_colors(lam, 3))
    out.update({p + "'": c for p, c in _n4_colors(lam, 2).items()})
    out.update({"u1": 1, "u2": 4, "u3": lam + 4, "u4": 1})
    if mirrored:
        return {p: lam + 5 - c for p, c in out.items()}
    return out


def _f3_colors(lam: int) -> Dict[str, int]:
    out = {}
    for suf, mirrored in ((".1", True), (".2", False), (".3", True)):
        out.update({p + suf: c for p, c in _f4_colors(lam, mirrored).items()})
    out.update({"w1": 2, "w2": lam + 3, "w3": 3})
    return out


def _f2_colors(lam: int) -> Dict[str, int]:
    out = {p + ".1": c for p, c in _f4_colors(lam, True).items()}
    out.update({p + ".2": c for p, c in _f3_colors(lam).items()})
    out.update({p + ".3": c for p, c in _f4_colors(lam, False).items()})
    out.update({"z1": 2, "z2": lam + 2})
    return out


def reduce_3sat_to_tree(formula: CnfFormula, lam: int) -> Reduction:
    """3-SAT to backbone coloring with a spanning tree backbone at
    k = lambda + 4.  Only valid for lambda >= 4: the gadget forcing
    arguments need the low band {1..4} and high band {lambda+1..lambda+4}
    disjoint.

    The input is normalized first (see normalize_3sat).  Variables become
    rings of characteristic-vertex gadget pairs, clauses become
    three-branch gadgets, and one auxiliary backbone tree picks up a
    connection vertex from every backbone component so the whole backbone
    is a single spanning tree.
    """
    if lam < 4:
        raise ValueError("the tree reduction needs lambda >= 4")
    norm, flipped = normalize_3sat(formula)
    n = norm.num_vars
    if n == 0:
        raise ValueError("formula has no variables")
    pos = {v: 0 for v in range(1, n + 1)}
    neg = {v: 0 for v in range(1, n + 1)}
    for cl in norm.clauses:
        for lit in cl:
            (pos if lit > 0 else neg)[abs(lit)] += 1

    frags: List[GadgetFragment] = []
    var_frag: Dict[int, int] = {}
    var_m: Dict[int, int] = {}
    for v in range(1, n + 1):
        var_frag[v] = len(frags)
        var_m[v] = max(pos[v], neg[v], 1)
        frags.append(build_gadget("TreeVariable", lam, param=var_m[v]))

    joins = []
    clause_frags = []
    cpos = {v: 0 for v in range(1, n + 1)}
    cneg = {v: 0 for v in range(1, n + 1)}
    clause_sports: List[List[Tuple[int, str]]] = []
    for cl in norm.clauses:
        ci = len(frags)
        clause_frags.append(ci)
        frags.append(build_gadget("TreeClause", lam))
        sports = []
        for b, lit in enumerate(cl, start=1):
            v = abs(lit)
            if lit > 0:
                cpos[v] += 1
                sport = f"s{2 * cpos[v]}"
            else:
                cneg[v] += 1
                sport = f"s{2 * cneg[v] - 1}"
            joins.append(((ci, f"y4.{b}"), (var_frag[v], sport), False))
            sports.append((var_frag[v], sport))
        clause_sports.append(sports)

    # auxiliary backbone tree: one leaf slot per anchor across all fragments
    anchor_refs: List[Tuple[int, str]] = []
    leafspec: List[str] = []
    for fi, frag in enumerate(frags):
        for port, parity in frag.anchors:
            anchor_refs.append((fi, port))
            leafspec.append(parity)
    aux_idx = len(frags)
    aux = build_gadget("AuxBackboneTree", lam, leafspec=tuple(leafspec))
    frags.append(aux)
    depths = plan_aux_spine(leafspec)
    for (fi, port), d in zip(anchor_refs, depths):
        spine = "r" if d == 0 else f"p{d}"
        joins.append(((aux_idx, spine), (fi, port), True))

    inst = wire(frags, joins)
    offs = _offsets(frags)
    probes = {v: frags[fi].ports["s2"] + offs[fi] for v, fi in var_frag.items()}
    reference = frags[aux_idx].ports["r"] + offs[aux_idx]
    anchors = tuple(
        tuple(frags[ci].ports[f"y4.{b}"] + offs[ci] for b in (1, 2, 3))
        for ci in clause_frags)
    cert = ReductionCertificate(
        target="tree", lam=lam, k=lam + 4, num_vars=formula.num_vars,
        size=inst.n, probes=probes, true_color=1, reference=reference,
        reference_low=(1, 2, 3, 4), mirror_sum=lam + 5, flipped=flipped,
        clause_anchors=anchors)
    layout = {"frags": frags, "offs": offs, "var_frag": var_frag,
              "var_m": var_m, "clause_frags": clause_frags,
              "clause_sports": clause_sports, "aux_idx": aux_idx,
              "depths": depths, "leafspec": leafspec}
    return Reduction(inst, cert, norm, layout)


def _complete_tree(red: Reduction, phi: Dict[int, bool]) -> Coloring:
    lam = red.certificate.lam
    frags, offs = red.layout["frags"], red.layout["offs"]
    colors = [0] * (red.instance.n + 1)
    f2 = _f2_colors(lam)
    for v, fi in red.layout["var_frag"].items():
        frag, off = frags[fi], offs[fi]
        for j in range(1, 2 * red.layout["var_m"][v] + 1):
            _paint(colors, frag, off, {f"{p}.{j}": c for p, c in f2.items()})
            even = j % 2 == 0
            low = 1 if (even == phi[v]) else 2
            colors[frag.ports[f"s{j}"] + off] = low
    clause_templates = {}
    for cl, ci in zip(red.formula.clauses, red.layout["clause_frags"]):
        frag, off = frags[ci], offs[ci]
        true_branch = next(b for b, lit in enumerate(cl, start=1)
                           if phi[abs(lit)] == (lit > 0))
        if true_branch not in clause_templates:
            out = {}
            rest = [(3, lam + 3, lam + 4, 3), (2, lam + 2, lam + 4, 3)]
            ri = 0
            for b in (1, 2, 3):
                if b == true_branch:
                    ys = (4, lam + 4, lam + 2, 2)
                else:
                    ys = rest[ri]
                    ri += 1
                for i, c in enumerate(ys, start=1):
                    out[f"y{i}.{b}"] = c
                out.update({f"{p}.{b}1": c
                            for p, c in _f4_colors(lam, True).items()})
                out.update({f"{p}.{b}2": c for p, c in _f3_colors(lam).items()})
                out.update({f"{p}.{b}3": c
                            for p, c in _f4_colors(lam, True).items()})
            clause_templates[true_branch] = out
        _paint(colors, frag, off, clause_templates[true_branch])
    # auxiliary tree: color by depth parity
    aux_idx = red.layout["aux_idx"]
    frag, off = frags[aux_idx], offs[aux_idx]
    top = max(red.layout["depths"], default=0)
    for d in range(top + 1):
        port = "r" if d == 0 else f"p{d}"
        colors[frag.ports[port] + off] = 1 if d % 2 == 0 else lam + 4
    for i, d in enumerate(red.layout["depths"], start=1):
        colors[frag.ports[f"leaf{i}"] + off] = lam + 4 if d % 2 == 0 else 1
    return _finish(red, colors)


# ---------------------------------------------------------------------------
# completion dispatch
# ---------------------------------------------------------------------------

def assignment_to_coloring(red: Reduction,
                           assignment: Dict[int, bool]) -> Coloring:
    """Turn a satisfying assignment of the original formula into a
    verified lambda-backbone k-coloring of the reduced instance.

    For the 3-SAT reductions the assignment is extended over the
    normalization: flipped variables invert, fresh split variables default
    to false.  Raises ValueError if the assignment does not satisfy the
    encoded formula.
    """
    cert = red.certificate
    flip = set(cert.flipped)
    nae = cert.target in ("matching", "galaxy")
    phi: Dict[int, bool] = {}
    for v in range(1, red.formula.num_vars + 1):
        base = assignment.get(v, False)
        phi[v] = (not base) if v in flip else base
    for ci, cl in enumerate(red.formula.clauses, start=1):
        if not _clause_ok(cl, phi, nae):
            raise ValueError(f"assignment does not satisfy clause {ci} "
                             "of the encoded formula")
    if cert.target == "matching":
        return _complete_matching(red, phi)
    if cert.target == "galaxy":
        return _complete_galaxy(red, phi)
    if cert.target == "path":
        return _complete_path(red, phi)
    if cert.target == "tree":
        return _complete_tree(red, phi)
    raise ValueError(f"unknown reduction target {cert.target!r}")
