"""The undirected [0,n]-p-path polytope on the complete graph K_{n+1}.

Edges are pairs ``(i, j)`` with ``i < j`` in lexicographic order.  A
[0,n]-path with p edges has the same node sequences as a directed
(0,n)-path of length p, so enumeration reuses the directed code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import EQ, GE, LE, Digraph, Inequality
from .enumeration import path_sequences
from .lab import DescriptionReport, FacetReport, _dim_of, _slack, check_description, face_report
from .linalg import rank, rref

Edge = tuple[int, int]


def edge(i: int, j: int) -> Edge:
    if i == j:
        raise ValueError("loops are not edges")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class UGraph:
    n: int
    edges: tuple = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")
        es = tuple(combinations(range(self.n + 1), 2))
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "_index", {e: k for k, e in enumerate(es)})

    @property
    def nodes(self) -> range:
        return range(self.n + 1)

    @property
    def internal(self) -> range:
        return range(1, self.n)

    def __len__(self) -> int:
        return len(self.edges)

    def index(self, e: Edge) -> int:
        return self._index[edge(*e)]

    def delta(self, v: int) -> list[Edge]:
        return [e for e in self.edges if v in e]

    def between(self, S: Iterable[int], T: Iterable[int]) -> list[Edge]:
        S, T = set(S), set(T)
        return [e for e in self.edges if (e[0] in S and e[1] in T) or (e[1] in S and e[0] in T)]

    def cut(self, S: Iterable[int]) -> list[Edge]:
        S = set(S)
        return self.between(S, set(self.nodes) - S)


def upath_edges(seq: Sequence[int]) -> list[Edge]:
    return [edge(a, b) for a, b in zip(seq, seq[1:])]


@lru_cache(maxsize=64)
def upath_sequences(g: UGraph, p: int) -> tuple:
    """Node sequences of all simple [0,n]-paths with ``p`` edges."""
    if p == 1:
        return ((0, g.n),)
    if p < 1 or p > g.n:
        return ()
    return path_sequences(Digraph(g.n), p)


def enumerate_upaths(g: UGraph, p: int) -> list[tuple[Edge, ...]]:
    return [tuple(upath_edges(s)) for s in upath_sequences(g, p)]


def expected_udimension(n: int, p: int) -> Optional[int]:
    m = n * (n + 1) // 2
    if p == 1:
        return 0
    if p == 2:
        return n - 2
    if p == 3 or (p == n and n >= 4):
        return m - n - 2
    if 4 <= p < n:
        return m - 4
    return None


@lru_cache(maxsize=64)
def udimension(g: UGraph, p: int) -> int:
    seqs = upath_sequences(g, p)
    if not seqs:
        raise ValueError(f"no [0,{g.n}]-{p}-paths exist")
    return _dim_of(seqs, upath_edges, g._index)


def check_uvalidity(ineq: Inequality, g: UGraph, p: int) -> bool:
    return all(_slack(ineq, upath_edges(s)) >= 0 for s in upath_sequences(g, p))


def check_ufacet(ineq: Inequality, g: UGraph, p: int) -> FacetReport:
    return face_report(ineq, upath_sequences(g, p), upath_edges, g._index, udimension(g, p))


# ---------------------------------------------------------------------------
# rows and families


def _row(edges: Iterable[Edge], value=1, coeffs: Optional[dict] = None) -> dict:
    c = {} if coeffs is None else coeffs
    for e in edges:
        c[e] = c.get(e, 0) + value
    return c


def uequality_system(g: UGraph, p: int) -> list[Inequality]:
    """``y_0n = 0``, both end degrees 1 and ``y(E) = p``; for p = 3 the degree balance rows."""
    n = g.n
    rows = [
        Inequality({(0, n): 1}, EQ, 0, "model_row", {"row": "y0n"}),
        Inequality(_row(g.delta(0)), EQ, 1, "model_row", {"row": "deg0"}),
        Inequality(_row(g.delta(n)), EQ, 1, "model_row", {"row": "degn"}),
    ]
    if p == 3:
        for i in g.internal:
            c = _row(g.delta(i))
            _row([(0, i), (i, n)], -2, c)
            rows.append(Inequality(c, EQ, 0, "model_row", {"row": "balance", "node": i}))
    else:
        rows.append(Inequality(_row(g.edges), EQ, p, "model_row", {"row": "card"}))
    return rows


def gen_udegree(g: UGraph, j: int) -> Inequality:
    if j not in g.internal:
        raise ValueError("degree rows are for internal nodes")
    return Inequality(_row(g.delta(j)), LE, 2, "udegree", {"j": j})


def gen_unonneg(g: UGraph, e: Edge) -> Inequality:
    e = edge(*e)
    return Inequality({e: 1}, GE, 0, "unonneg", {"edge": e})


def gen_parity(g: UGraph, j: int, e: Edge) -> Inequality:
    e = edge(*e)
    if j not in e:
        raise ValueError("the edge must meet j")
    c = _row([f for f in g.delta(j) if f != e])
    c[e] = -1
    return Inequality(c, GE, 0, "parity", {"j": j, "edge": e})


def _ends_in(g: UGraph, S: Iterable[int]) -> tuple[int, ...]:
    S = tuple(sorted(set(S)))
    if 0 not in S or g.n not in S:
        raise ValueError("S must contain 0 and n")
    if len(S) > g.n:
        raise ValueError("S must be a proper subset")
    return S


def gen_umin_cut(g: UGraph, S: Iterable[int]) -> Inequality:
    """``y(delta(S)) >= 2`` with ``0, n`` in ``S``."""
    S = _ends_in(g, S)
    return Inequality(_row(g.cut(S)), GE, 2, "umin_cut", {"S": S})


def gen_uone_sided_min_cut(g: UGraph, S: Iterable[int], j: int) -> Inequality:
    """``y(delta(S)) - y(delta(j)) >= 0`` with ``0, n`` in ``S`` and ``j`` outside."""
    S = _ends_in(g, S)
    if j in S:
        raise ValueError("j must lie outside S")
    c = _row(g.cut(S))
    _row(g.delta(j), -1, c)
    return Inequality(c, GE, 0, "uone_sided_min_cut", {"S": S, "j": j})


def gen_umax_cut(g: UGraph, S: Iterable[int], p: int, rhs: Optional[int] = None) -> Inequality:
    """``y(delta(S)) <= rhs``, by default ``p - 1``.

    With 0 and n on the same side a path crosses the cut an even number
    of times, otherwise an odd number; either way at most ``p - 1`` times
    when the parity of ``p`` is the opposite one.
    """
    S = tuple(sorted(set(S)))
    if 0 not in S:
        raise ValueError("S must contain 0")
    rhs = p - 1 if rhs is None else rhs
    return Inequality(_row(g.cut(S)), LE, rhs, "umax_cut", {"S": S, "p": p})


def gen_umax_cut_half(g: UGraph, S: Iterable[int], p: int) -> Inequality:
    """``y(delta(S)) <= p/2`` for 0 in S and n outside, as literally listed for even p."""
    S = tuple(sorted(set(S)))
    if 0 not in S or g.n in S:
        raise ValueError("need 0 in S and n outside S")
    return Inequality(_row(g.cut(S)), LE, p // 2, "umax_cut_half", {"S": S, "p": p})


def umodel_rows(g: UGraph, p: int) -> list[Inequality]:
    """Integer-model rows for ``4 <= p <= n-1`` without the integrality condition."""
    n = g.n
    rows = uequality_system(g, p)
    rows += [gen_udegree(g, j) for j in g.internal]
    rows += [gen_parity(g, j, e) for j in g.internal for e in g.delta(j)]
    inner = list(g.internal)
    for size in range(1, n - 3):
        for extra in combinations(inner, size):
            S = (0, *extra, n)
            for j in inner:
                if j not in extra:
                    rows.append(gen_uone_sided_min_cut(g, S, j))
    return rows


def gen_family_105(g: UGraph, delta: Sequence[int]) -> Inequality:
    """``sum_i d_i y_in + sum_{i<j} floor((2 - d_i - d_j)/2) y_ij <= 1`` over internal ``i, j``."""
    delta = tuple(int(x) for x in delta)
    n = g.n
    if len(delta) != n - 1 or any(x not in (0, 1) for x in delta):
        raise ValueError("delta needs n-1 entries in {0,1}")
    if not 1 <= sum(delta) <= n - 2:
        raise ValueError("need 1 <= sum(delta) <= n-2")
    c: dict = {}
    for i in g.internal:
        if delta[i - 1]:
            c[(i, n)] = 1
    for i, j in combinations(g.internal, 2):
        v = (2 - delta[i - 1] - delta[j - 1]) // 2
        if v:
            c[(i, j)] = v
    return Inequality(c, LE, 1, "undirected_105", {"delta": delta})


def iter_delta_tuples(n: int):
    for bits in range(1, 2 ** (n - 1)):
        t = tuple((bits >> k) & 1 for k in range(n - 1))
        if 1 <= sum(t) <= n - 2:
            yield t


# ---------------------------------------------------------------------------
# equivalence modulo the equations


def _reduce(ineq: Inequality, g: UGraph, p: int):
    """A normal form of ``ineq`` (as ``<=``) modulo the affine hull; ``None`` if it is an equation."""
    leq = ineq.as_leq() if ineq.sense != EQ else ineq
    eqs = uequality_system(g, p)
    cols = list(g.edges)
    rows = [[q.coeff(e) for e in cols] + [q.rhs] for q in eqs]
    red, piv = rref(rows)
    vec = [leq.coeff(e) for e in cols] + [leq.rhs]
    for r, pc in zip(red, piv):
        f = vec[pc]
        if f:
            vec = [a - f * b for a, b in zip(vec, r)]
    lead = next((x for x in vec[:-1] if x), None)
    if lead is None:
        return None
    lead = abs(lead)
    return tuple(x / lead for x in vec)


def uequivalent(a: Inequality, b: Inequality, g: UGraph, p: int) -> bool:
    """Same inequality up to positive scaling and the equations of the affine hull.

    Uses the equation rows of the model, which span the affine hull for
    ``4 <= p <= n - 1`` and for p = 3.
    """
    ra, rb = _reduce(a, g, p), _reduce(b, g, p)
    return ra is not None and ra == rb


# ---------------------------------------------------------------------------
# listed descriptions


def table2_system(g: UGraph, p: int) -> tuple[list[Inequality], list[Inequality]]:
    """Listed descriptions for p = 1 and p = 2."""
    n = g.n
    eqs: list[Inequality] = []
    les: list[Inequality] = []
    if p == 1:
        eqs.append(Inequality({(0, n): 1}, EQ, 1, "table2", {"row": "y0n=1"}))
        eqs += [Inequality({e: 1}, EQ, 0, "table2", {"row": "zero", "edge": e})
                for e in g.edges if e != (0, n)]
        return eqs, les
    if p == 2:
        eqs.append(Inequality({(0, n): 1}, EQ, 0, "table2", {"row": "y0n=0"}))
        eqs.append(Inequality(_row(g.delta(0)), EQ, 1, "table2", {"row": "deg0"}))
        for i in g.internal:
            eqs.append(Inequality({(0, i): 1, (i, n): -1}, EQ, 0, "table2", {"row": "y0i=yin", "node": i}))
            les.append(Inequality({(0, i): 1}, GE, 0, "table2", {"row": "y0i>=0", "node": i}))
        eqs += [Inequality({e: 1}, EQ, 0, "table2", {"row": "internal", "edge": e})
                for e in combinations(g.internal, 2)]
        return eqs, les
    raise ValueError("listed descriptions exist for p in {1, 2}")


def verify_table2(n: int, p: int, completeness: Optional[bool] = None) -> DescriptionReport:
    g = UGraph(n)
    eqs, les = table2_system(g, p)
    completeness = n <= 5 if completeness is None else completeness
    return check_description(eqs, les, upath_sequences(g, p), upath_edges, g._index,
                             expected_udimension(n, p), completeness)


def t100_system(g: UGraph) -> tuple[list[Inequality], list[Inequality]]:
    n = g.n
    eqs = uequality_system(g, 3)
    les = [gen_unonneg(g, (i, j)) for i, j in combinations(range(1, n + 1), 2)]
    les += [gen_family_105(g, t) for t in iter_delta_tuples(n)]
    return eqs, les


def _antichain(ineqs: Sequence[Inequality], seqs) -> bool:
    faces = []
    for q in ineqs:
        faces.append(frozenset(k for k, s in enumerate(seqs) if _slack(q, upath_edges(s)) == 0))
    for a in range(len(faces)):
        for b in range(len(faces)):
            if a != b and faces[a] <= faces[b]:
                return False
    return True


def verify_T100(n: int, completeness: Optional[bool] = None) -> DescriptionReport:
    """Check the p = 3 description: equations, validity, facets, non-redundancy, completeness."""
    g = UGraph(n)
    seqs = upath_sequences(g, 3)
    eqs, les = t100_system(g)
    completeness = n <= 5 if completeness is None else completeness
    rep = check_description(eqs, les, seqs, upath_edges, g._index, expected_udimension(n, 3), completeness)
    inner_sum = Inequality(_row(combinations(g.internal, 2)), EQ, 1, "derived", {})
    rep.checks["internal edges sum to 1"] = all(inner_sum.lhs_on(upath_edges(s)) == 1 for s in seqs)
    cols = list(g.edges)
    rep.checks["equations independent"] = rank([[q.coeff(e) for e in cols] for q in eqs]) == len(eqs)
    distinct, dup = [], 0
    seen: set = set()
    for q in les:
        key = _reduce(q, g, 3)
        if key in seen:
            dup += 1
            continue
        seen.add(key)
        distinct.append(q)
    rep.checks["faces form an anti-chain"] = _antichain(distinct, seqs)
    if dup:
        rep.notes.append(f"{dup} listed rows coincide with other listed rows modulo the equations")
    return rep


# ---------------------------------------------------------------------------
# parameter sweeps for the listed facet classes (4 <= p < n)


def iter_corollary_facets(g: UGraph, p: int):
    """``(label, inequality)`` for every parameter choice meeting the listed facet conditions."""
    n = g.n
    inner = list(g.internal)
    for j in inner:
        yield "degree", gen_udegree(g, j)
    for size in range(1, n):
        for extra in combinations(inner, size):
            S = (0, *extra, n)
            rest = [v for v in g.nodes if v not in S]
            if 3 <= len(S) <= p:
                yield "min_cut", gen_umin_cut(g, S)
            if len(S) >= p + 1 and len(rest) >= 2:
                for j in rest:
                    yield "one_sided_min_cut", gen_uone_sided_min_cut(g, S, j)
            if p % 2 == 1 and len(S) - 1 > p / 2 and len(rest) > p / 2:
                yield "max_cut_odd", gen_umax_cut(g, S, p)
    if p % 2 == 0:
        for size in range(0, n - 1):
            for extra in combinations(inner, size):
                S = (0, *extra)
                T = [v for v in g.nodes if v not in S]
                if len(S) > p / 2 and len(T) > p / 2:
                    yield "max_cut_even", gen_umax_cut(g, S, p)
