"""Validity, facet and dimension checks by enumeration and exact rank.

A face check collects the points of a finite class (paths, cycles, paths of
several lengths) on which an inequality is tight and compares the affine
rank of those points with the dimension of the polytope they span.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .core import COMPLETE, EQ, GE, LE, Arc, Digraph, Inequality
from .enumeration import (bowtie_sequences, cycle_arcs, cycle_sequences, max_over_paths,
                          path_sequences, seq_arcs)
from .families import Verdict, gen_nonneg, iter_brooms
from .linalg import RowReducer, affine_dimension, equivalent, rank
from .polyhedron import enumerate_vertices


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    checked: int
    tight_count: int
    violator: Optional[tuple] = None
    violation: Fraction = Fraction(0)


@dataclass(frozen=True)
class FacetReport:
    valid: bool
    tight_count: int
    tight_affine_dim: int
    polytope_dim: int
    is_facet: bool
    violator: Optional[tuple] = None
    violation: Fraction = Fraction(0)

    def lines(self) -> list[str]:
        out = [f"valid: {str(self.valid).lower()}",
               f"tight_count: {self.tight_count}",
               f"tight_affine_dim: {self.tight_affine_dim}",
               f"polytope_dim: {self.polytope_dim}",
               f"is_facet: {str(self.is_facet).lower()}"]
        if self.violator is not None:
            out.append(f"violator: {' '.join(map(str, self.violator))}")
            v = self.violation
            out.append(f"violation: {v.numerator}/{v.denominator}")
        return out


# ---------------------------------------------------------------------------
# generic machinery over a list of labelled arc sets


def _slack(ineq: Inequality, arcs: Iterable[Arc]) -> Fraction:
    """``rhs - lhs`` in the inequality's own orientation (>= 0 when satisfied)."""
    v = ineq.lhs_on(arcs)
    if ineq.sense == GE:
        return v - ineq.rhs
    return ineq.rhs - v


def face_report(ineq: Inequality, objects: Sequence[tuple], arcs_of, index: dict, dim: int) -> FacetReport:
    """Facet test of ``ineq`` against the points ``objects``.

    ``arcs_of`` maps an object to its arc list and ``index`` maps arcs to
    coordinates.  ``dim`` is the dimension of the polytope spanned by all
    objects.
    """
    ncols = len(index)
    rr = RowReducer()
    tight = 0
    worst = None
    worst_v = Fraction(0)
    for obj in objects:
        arcs = arcs_of(obj)
        s = _slack(ineq, arcs) if ineq.sense != EQ else -abs(ineq.lhs_on(arcs) - ineq.rhs)
        if s < 0:
            if worst is None or -s > worst_v:
                worst, worst_v = obj, -s
            continue
        if s == 0:
            tight += 1
            row = [0] * (ncols + 1)
            row[0] = 1
            for a in arcs:
                row[index[a] + 1] = 1
            rr.add(row)
    valid = worst is None
    tdim = rr.rank - 1
    return FacetReport(valid, tight, tdim, dim, valid and tdim == dim - 1, worst, worst_v)


def _dim_of(objects: Sequence[tuple], arcs_of, index: dict) -> int:
    ncols = len(index)
    rows = []
    for obj in objects:
        row = [0] * (ncols + 1)
        row[0] = 1
        for a in arcs_of(obj):
            row[index[a] + 1] = 1
        rows.append(row)
    return affine_dimension(rows) if rows else -1


# ---------------------------------------------------------------------------
# the path polytope


def expected_dimension(n: int, p: int) -> Optional[int]:
    """Closed-form dimension of the (0,n)-p-path polytope."""
    if p == 1:
        return 0
    if p == 2:
        return n - 2
    if p == 3 or p == n:
        return n * n - 3 * n + 1
    if 4 <= p < n:
        return n * n - 2 * n - 1
    return None


@lru_cache(maxsize=128)
def polytope_dimension(d: Digraph, p: int) -> int:
    seqs = path_sequences(d, p)
    if not seqs:
        raise ValueError(f"no (0,{d.n})-{p}-paths exist")
    return _dim_of(seqs, seq_arcs, d._index)


def check_validity(ineq: Inequality, d: Digraph, p: int) -> ValidityReport:
    seqs = path_sequences(d, p)
    if not seqs:
        raise ValueError(f"no (0,{d.n})-{p}-paths exist")
    tight = 0
    worst, worst_v = None, Fraction(0)
    for s in seqs:
        sl = _slack(ineq, seq_arcs(s)) if ineq.sense != EQ else -abs(ineq.lhs_on(seq_arcs(s)) - ineq.rhs)
        if sl < 0 and (worst is None or -sl > worst_v):
            worst, worst_v = s, -sl
        elif sl == 0:
            tight += 1
    return ValidityReport(worst is None, len(seqs), tight, worst, worst_v)


def check_facet(ineq: Inequality, d: Digraph, p: int, dim: Optional[int] = None) -> FacetReport:
    seqs = path_sequences(d, p)
    if not seqs:
        raise ValueError(f"no (0,{d.n})-{p}-paths exist")
    dim = polytope_dimension(d, p) if dim is None else dim
    return face_report(ineq, seqs, seq_arcs, d._index, dim)


def tight_paths(ineq: Inequality, d: Digraph, p: int) -> list[tuple]:
    return [s for s in path_sequences(d, p) if _slack(ineq, seq_arcs(s)) == 0]


# ---------------------------------------------------------------------------
# cycle polytope and relaxed path polytopes


@lru_cache(maxsize=32)
def cycle_polytope_dimension(dn: Digraph, p: int) -> int:
    return _dim_of(cycle_sequences(dn, p), cycle_arcs, dn._index)


def check_cycle_facet(ineq: Inequality, dn: Digraph, p: int) -> FacetReport:
    return face_report(ineq, cycle_sequences(dn, p), cycle_arcs, dn._index,
                       cycle_polytope_dimension(dn, p))


def relaxed_lengths(d: Digraph, p: int, direction: str) -> range:
    low = 1 if d.mode == COMPLETE else 2
    if direction == "lower":
        return range(low, p + 1)
    if direction == "upper":
        return range(p, d.n + 1)
    raise ValueError("direction must be 'lower' or 'upper'")


@lru_cache(maxsize=32)
def relaxed_sequences(d: Digraph, p: int, direction: str) -> tuple:
    out = []
    for q in relaxed_lengths(d, p, direction):
        out.extend(path_sequences(d, q))
    return tuple(out)


@lru_cache(maxsize=32)
def relaxed_dimension(d: Digraph, p: int, direction: str) -> int:
    return _dim_of(relaxed_sequences(d, p, direction), seq_arcs, d._index)


def check_relaxed_facet(ineq: Inequality, d: Digraph, p: int, direction: str) -> FacetReport:
    return face_report(ineq, relaxed_sequences(d, p, direction), seq_arcs, d._index,
                       relaxed_dimension(d, p, direction))


# ---------------------------------------------------------------------------
# oracle verdicts in the same vocabulary as the closed-form predicates


def oracle_verdicts(ineq: Inequality, d: Digraph, p: int) -> tuple[bool, bool]:
    rep = check_facet(ineq, d, p)
    return rep.valid, rep.is_facet


def agrees(predicted: Verdict, actual: bool) -> bool:
    """A closed-form verdict is contradicted only by a definite mismatch."""
    if predicted == Verdict.UNKNOWN:
        return True
    if predicted == Verdict.SUFFICIENT:
        return actual
    return (predicted == Verdict.TRUE) == actual


# ---------------------------------------------------------------------------
# listed linear descriptions for p <= 3 on the complete digraph


def table1_system(d: Digraph, p: int) -> tuple[list[Inequality], list[Inequality]]:
    """Equations and inequalities listed for p in {1, 2, 3} on the complete digraph."""
    if d.mode != COMPLETE:
        raise ValueError("the listed descriptions live on the complete digraph")
    n = d.n
    eqs: list[Inequality] = []
    les: list[Inequality] = []
    inner = [v for v in d.internal]
    if p == 1:
        eqs.append(Inequality({(0, n): 1}, EQ, 1, "table1", {"row": "x0n=1"}))
        for a in d.arcs:
            if a != (0, n):
                eqs.append(Inequality({a: 1}, EQ, 0, "table1", {"row": "zero", "arc": a}))
        return eqs, les
    eqs.append(Inequality({a: 1 for a in d.in_arcs(0)}, EQ, 0, "table1", {"row": "in(0)=0"}))
    eqs.append(Inequality({a: 1 for a in d.out_arcs(n)}, EQ, 0, "table1", {"row": "out(n)=0"}))
    if p == 2:
        for a in d.inside(inner):
            eqs.append(Inequality({a: 1}, EQ, 0, "table1", {"row": "internal=0", "arc": a}))
        eqs.append(Inequality({a: 1 for a in d.out_arcs(0)}, EQ, 1, "table1", {"row": "out(0)=1"}))
        for j in inner:
            eqs.append(Inequality({(0, j): 1, (j, n): -1}, EQ, 0, "table1", {"row": "x0j=xjn", "node": j}))
            les.append(Inequality({(0, j): 1}, GE, 0, "table1", {"row": "x0j>=0", "node": j}))
        return eqs, les
    if p == 3:
        eqs.append(Inequality({a: 1 for a in d.inside(inner)}, EQ, 1, "table1", {"row": "x(A(inner))=1"}))
        for i in inner:
            c: dict = {}
            for a in d.out_arcs(i):
                c[a] = c.get(a, 0) + 1
            c[(0, i)] = c.get((0, i), 0) - 1
            c[(i, n)] = c.get((i, n), 0) - 1
            eqs.append(Inequality(c, EQ, 0, "table1", {"row": "out(i)", "node": i}))
            c = {}
            for a in d.in_arcs(i):
                c[a] = c.get(a, 0) + 1
            c[(0, i)] = c.get((0, i), 0) - 1
            c[(i, n)] = c.get((i, n), 0) - 1
            eqs.append(Inequality(c, EQ, 0, "table1", {"row": "in(i)", "node": i}))
        for a in d.inside(inner):
            les.append(Inequality({a: 1}, GE, 0, "table1", {"row": "nonneg", "arc": a}))
        return eqs, les
    raise ValueError("listed descriptions exist for p in {1, 2, 3}")


def table1_closure(d: Digraph, p: int) -> tuple[list[Inequality], list[Inequality]]:
    """Rows added so the listed systems describe a polytope on the complete digraph.

    The listed rows leave arcs into 0, arcs out of n and (for p = 3) the arc
    (0,n) unconstrained in sign; nonnegativity of every arc and ``x_0n = 0``
    close those gaps.
    """
    eqs: list[Inequality] = []
    les = [Inequality({a: 1}, GE, 0, "closure", {"arc": a}) for a in d.arcs]
    if p in (2, 3):
        eqs.append(Inequality({(0, d.n): 1}, EQ, 0, "closure", {"arc": (0, d.n)}))
    return eqs, les


@dataclass
class DescriptionReport:
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = [f"{k}: {'pass' if v else 'FAIL'}" for k, v in self.checks.items()]
        return out + [f"note: {m}" for m in self.notes]


def _to_rows(ineqs: Sequence[Inequality], index: dict):
    """Split into (eq rows, eq rhs, le rows, le rhs) over ``index`` coordinates."""
    ncols = len(index)
    er, eb, lr, lb = [], [], [], []
    for q in ineqs:
        v = [Fraction(0)] * ncols
        for a, c in q.coeffs.items():
            v[index[a]] = c
        if q.sense == EQ:
            er.append(v)
            eb.append(q.rhs)
        elif q.sense == LE:
            lr.append(v)
            lb.append(q.rhs)
        else:
            lr.append([-x for x in v])
            lb.append(-q.rhs)
    return er, eb, lr, lb


def check_description(equations: Sequence[Inequality], inequalities: Sequence[Inequality], objects,
                      arcs_of, index: dict, dim: int, completeness: bool,
                      extra: Sequence[Inequality] = ()) -> DescriptionReport:
    """Soundness, facetness and (optionally) completeness of a linear description.

    ``extra`` rows join the system for the completeness test only.
    """
    rep = DescriptionReport()
    objects = list(objects)
    evecs = []
    for obj in objects:
        v = [0] * len(index)
        for a in arcs_of(obj):
            v[index[a]] = 1
        evecs.append(tuple(v))
    rep.checks["equations hold"] = all(
        all(q.lhs_on(arcs_of(o)) == q.rhs for o in objects) for q in equations)
    rep.checks["inequalities valid"] = all(
        all(_slack(q, arcs_of(o)) >= 0 for o in objects) for q in inequalities)
    actual = _dim_of(objects, arcs_of, index)
    rep.checks["dimension"] = actual == dim
    eq_rank_rows = []
    for q in equations:
        eq_rank_rows.append([q.coeff(a) for a in index])
    spans = len(index) - rank(eq_rank_rows) == actual
    rep.notes.append(f"listed equations alone span the affine hull: {str(spans).lower()}")
    rep.checks["inequalities are facets"] = all(
        face_report(q, objects, arcs_of, index, actual).is_facet for q in inequalities)
    if completeness:
        er, eb, lr, lb = _to_rows(list(equations) + list(extra) + list(inequalities), index)
        info = enumerate_vertices(er, eb, lr, lb, len(index))
        ok = info.pointed and not info.empty and not info.rays
        verts = set(tuple(int(x) for x in v) for v in info.vertices
                    if all(x.denominator == 1 for x in v))
        ok = ok and len(verts) == len(info.vertices) and verts == set(evecs)
        rep.checks["complete (vertices are exactly the points)"] = ok
        if not ok:
            rep.notes.append(f"pointed={info.pointed} rays={len(info.rays)} vertices={len(info.vertices)}")
    return rep


def verify_table1(n: int, p: int, completeness: Optional[bool] = None) -> DescriptionReport:
    """Check the listed description for ``p`` in {1,2,3} on the complete digraph.

    Completeness is tested by vertex enumeration (default for ``n <= 5``)
    on the listed rows together with the closure rows; the verdict for the
    bare listed rows is reported as a note.
    """
    d = Digraph(n, COMPLETE)
    completeness = n <= 5 if completeness is None else completeness
    eqs, les = table1_system(d, p)
    ceqs, cles = table1_closure(d, p)
    objects = path_sequences(d, p)
    rep = check_description(eqs, les, objects, seq_arcs, d._index, expected_dimension(n, p),
                            completeness, extra=list(ceqs) + list(cles))
    if completeness:
        er, eb, lr, lb = _to_rows(list(eqs) + list(les), d._index)
        info = enumerate_vertices(er, eb, lr, lb, len(d._index))
        bare = info.pointed and not info.rays and len(info.vertices) == len(objects)
        rep.notes.append(f"listed rows alone describe a polytope: {str(bare).lower()}")
    return rep


# ---------------------------------------------------------------------------
# lifting preconditions


def check_regularity(ineq: Inequality, d: Digraph, p: int) -> str:
    """``regular``, ``not-regular`` or ``unknown``; see module docs for the criterion."""
    leq = ineq.as_leq()
    for a in d.arcs:
        if equivalent(leq, gen_nonneg(d, a), d, p):
            return "not-regular"
    for b in iter_brooms(d):
        if equivalent(leq, b, d, p):
            return "not-regular"
    seqs = path_sequences(d, p)
    for k in d.internal:
        if not any(k not in s and _slack(leq, seq_arcs(s)) > 0 for s in seqs):
            return "unknown"
    return "regular"


@dataclass(frozen=True)
class CloneReport:
    ok: bool
    k: int
    bowties_ok: bool
    bowtie_violator: Optional[tuple]
    delta_k: Optional[Fraction]
    regularity: str
    facet: bool
    p_range_ok: bool


def check_T8_preconditions(ineq: Inequality, d: Digraph, p: int, k: int,
                           need_facet: bool = True) -> CloneReport:
    """Bowtie condition, the path maximum through ``k`` and regularity for cloning ``k``."""
    if k not in d.internal:
        raise ValueError("the cloned node must be internal")
    leq = ineq.as_leq()
    viol = None
    for b in bowtie_sequences(d, p, k):
        if leq.lhs_on(b.arcs) > leq.rhs:
            viol = (b.path, b.cycle)
            break
    opt = max_over_paths(d, leq.coeffs, p - 1, through=k)
    delta = opt.value
    reg = check_regularity(leq, d, p) if need_facet else "unknown"
    facet = check_facet(leq, d, p).is_facet if need_facet else True
    p_ok = 3 < p < d.n
    # a facet not equivalent to a nonnegativity or broom row is regular by definition
    ok = viol is None and delta is not None and p_ok and facet and reg != "not-regular"
    return CloneReport(ok, k, viol is None, viol, delta, reg, facet, p_ok)


@dataclass(frozen=True)
class SetLiftReport:
    ok: bool
    nonnegative: bool
    facet: bool
    gz_connected: bool
    tight_paths_meet_zero: bool
    single_class: bool
    p_range_ok: bool


def auxiliary_graph_connected(d: Digraph, arcs: Iterable[Arc]) -> bool:
    """Connectivity of the bipartite graph with tails ``v_0..v_{n-1}`` and heads ``w_1..w_n``."""
    n = d.n
    nodes = [("v", i) for i in range(n)] + [("w", j) for j in range(1, n + 1)]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in arcs:
        if ("v", i) in parent and ("w", j) in parent:
            parent[find(("v", i))] = find(("w", j))
    return len({find(x) for x in nodes}) == 1


def zero_arc_classes(leq: Inequality, d: Digraph, p: int) -> list[set]:
    """Classes of zero-coefficient arcs under co-occurrence in tight paths, closed transitively."""
    zero = [a for a in d.arcs if leq.coeff(a) == 0]
    parent = {a: a for a in zero}
    seen: set = set()

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in tight_paths(leq, d, p):
        za = [a for a in seq_arcs(s) if a in parent]
        seen.update(za)
        for a in za[1:]:
            parent[find(a)] = find(za[0])
    classes: dict = {}
    for a in zero:
        if a in seen:
            classes.setdefault(find(a), set()).add(a)
        else:
            classes[a] = {a}
    return list(classes.values())


def check_T9_preconditions(ineq: Inequality, d: Digraph, p: int, need_facet: bool = True) -> SetLiftReport:
    leq = ineq.as_leq()
    nonneg = all(c >= 0 for c in leq.coeffs.values())
    zero = [a for a in d.arcs if leq.coeff(a) == 0]
    gz = auxiliary_graph_connected(d, zero)
    meets = all(any(leq.coeff(a) == 0 for a in seq_arcs(s)) for s in tight_paths(leq, d, p))
    classes = zero_arc_classes(leq, d, p)
    single = len(classes) == 1
    facet = check_facet(leq, d, p).is_facet if need_facet else True
    p_ok = 3 < p < d.n
    ok = nonneg and facet and gz and meets and single and p_ok
    return SetLiftReport(ok, nonneg, facet, gz, meets, single, p_ok)
