"""Branch-and-cut for the minimum-cost (0,n)-p-path problem.

The LP relaxation starts from the flow rows, the cardinality row, the
degree rows and the unit box.  Each round asks the separation routines
for violated rows, one family at a time in a fixed order, and stops at
the first family that yields any.  When nothing more is found and the
point is still fractional, the most fractional arc is fixed to 1 and to
0 in two children, explored depth first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import Digraph, IncidenceVector, Inequality, Instance, _walk, is_path_arcs
from .families import gen_degree
from .formats import format_fraction
from .lab import check_validity
from .linalg import equality_system
from .separation import (FractionalPoint, separate_card_path, separate_min_cut, separate_one_sided_min_cut,
                         separate_partition_families, separate_trivial)
from .simplex import INFEASIBLE, OPTIMAL, DualSimplex

FAMILY_ORDER = ("trivial", "one_sided_min_cut", "min_cut", "partition", "card_path")
AUDIT_MAX_N = 8


@dataclass
class SolverConfig:
    max_rounds: int = 50
    cuts_per_round: int = 10
    seed: int = 0
    audit: bool = False
    max_nodes: int = 100000


@dataclass
class SolveReport:
    status: str
    value: Optional[Fraction] = None
    path: Optional[IncidenceVector] = None
    cuts_added: dict = field(default_factory=dict)
    nodes_explored: int = 0
    root_bounds: list = field(default_factory=list)
    audited: int = 0
    cuts: list = field(default_factory=list)
    log: list = field(default_factory=list)

    @property
    def sequence(self) -> Optional[tuple]:
        return None if self.path is None else self.path.nodes

    def lines(self) -> list[str]:
        out = [f"status: {self.status}"]
        if self.status == OPTIMAL:
            out.append(f"value: {format_fraction(self.value)}")
            out.append("path: " + " ".join(map(str, self.path.nodes)))
        out.append(f"nodes explored: {self.nodes_explored}")
        for fam in FAMILY_ORDER:
            out.append(f"cuts {fam}: {self.cuts_added.get(fam, 0)}")
        if self.audited:
            out.append(f"cuts audited: {self.audited}")
        return out + self.log


def _separators(p: int, seed: int):
    return {
        "trivial": lambda x: separate_trivial(x, p),
        "one_sided_min_cut": lambda x: separate_one_sided_min_cut(x),
        "min_cut": lambda x: separate_min_cut(x, p),
        "partition": lambda x: separate_partition_families(x, p, seed=seed),
        "card_path": lambda x: separate_card_path(x, p),
    }


def _integral(x: dict) -> bool:
    return all(v.denominator == 1 for v in x.values())


def _branch_arc(d: Digraph, x: dict):
    best = None
    for k, a in enumerate(d.arcs):
        v = x.get(a, Fraction(0))
        if v.denominator == 1:
            continue
        key = (abs(v - Fraction(1, 2)), k)
        if best is None or key < best[0]:
            best = (key, a)
    return None if best is None else best[1]


class CutAuditError(AssertionError):
    """A separated row failed re-verification."""


def solve(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    cfg = config or SolverConfig()
    d, p = instance.digraph, instance.p
    report = SolveReport(INFEASIBLE)
    lp = DualSimplex(d.arcs, instance.costs)
    for q in equality_system(d, p):
        lp.add_row(q)
    for j in d.internal:
        lp.add_row(gen_degree(d, j))
    seps = _separators(p, cfg.seed)
    known: set = set()
    incumbent: Optional[tuple] = None
    stack = [dict()]  # arc -> fixed value
    audit = cfg.audit and d.n <= AUDIT_MAX_N
    at_root = True
    while stack:
        fixed = stack.pop()
        report.nodes_explored += 1
        if report.nodes_explored > cfg.max_nodes:
            raise RuntimeError("node limit reached")
        for k, a in enumerate(d.arcs):
            v = fixed.get(a)
            lo, hi = (0, 1) if v is None else (v, v)
            if lp.lo[k] != lo or lp.hi[k] != hi:
                lp.lo[k], lp.hi[k] = Fraction(lo), Fraction(hi)
        lp.repark()
        res = None
        for rnd in range(cfg.max_rounds + 1):
            res = lp.solve()
            if res.status != OPTIMAL:
                break
            if at_root:
                report.root_bounds.append(res.value)
            if incumbent is not None and res.value >= incumbent[0]:
                break
            if rnd == cfg.max_rounds:
                break
            x = FractionalPoint(d, res.x)
            cuts = []
            for fam in FAMILY_ORDER:
                found = seps[fam](x)
                new = [(q, v) for q, v in found.found if q not in known]
                if new:
                    cuts = [(fam, q, v) for q, v in new[:cfg.cuts_per_round]]
                    break
            if not cuts:
                break
            for fam, q, v in cuts:
                if q.violation(x.values) <= 0:
                    raise CutAuditError(f"reported cut is not violated: {q}")
                if audit:
                    if not check_validity(q, d, p).valid:
                        raise CutAuditError(f"invalid cut from {fam}: {q}")
                    report.audited += 1
                known.add(q)
                report.cuts.append((fam, q, v))
                lp.add_row(q)
                report.cuts_added[fam] = report.cuts_added.get(fam, 0) + 1
        at_root = False
        if res is None or res.status != OPTIMAL:
            continue
        if incumbent is not None and res.value >= incumbent[0]:
            continue
        x = {a: v for a, v in res.x.items() if v}
        if _integral(x):
            arcs = sorted(a for a, v in x.items() if v == 1)
            if is_path_arcs(arcs, 0, d.n) and len(arcs) == p:
                incumbent = (res.value, tuple(_walk(arcs, 0)))
                continue
        a = _branch_arc(d, x)
        if a is None:
            # integral but not a path and no cut found: separation is exact here, so this is a bug
            raise RuntimeError("integral non-path point survived separation")
        report.log.append(f"branch on {a[0]},{a[1]} at value {x[a]}")
        stack.append({**fixed, a: 0})
        stack.append({**fixed, a: 1})
    if incumbent is not None:
        report.status = OPTIMAL
        report.value = incumbent[0]
        report.path = IncidenceVector.from_nodes(d, incumbent[1])
    return report
