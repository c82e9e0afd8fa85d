"""Exact linear algebra over the rationals.

Rank uses fraction-free integer elimination (rows are scaled to primitive
integer vectors), which keeps entries small for 0/1 incidence data.  The
equality system of the path polytope and the basis machinery built on it
also live here.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import (COMPLETE, EQ, LE, Arc, Digraph, IncidenceVector, Inequality,
                   as_fraction)

Matrix = list[list[Fraction]]


def _integer_row(row: Sequence) -> list[int]:
    if all(isinstance(v, int) for v in row):
        return list(row)
    fr = [as_fraction(v) for v in row]
    den = 1
    for v in fr:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in fr]


class RowReducer:
    """Incremental exact row space: feed rows, read off the rank.

    Each stored row has a distinct pivot column and is reduced against all
    earlier pivots, so ``add`` answers whether a row is independent of those
    already seen.
    """

    def __init__(self):
        self.basis: dict[int, list[int]] = {}

    def reduce(self, row: Sequence) -> list[int]:
        row = _integer_row(row)
        for pc, b in self.basis.items():
            v = row[pc]
            if v:
                bp = b[pc]
                row = [x * bp - v * y for x, y in zip(row, b)]
        return row

    def add(self, row: Sequence) -> bool:
        row = self.reduce(row)
        piv = next((k for k, x in enumerate(row) if x), None)
        if piv is None:
            return False
        g = 0
        for x in row:
            if x:
                g = math.gcd(g, x)
        if row[piv] < 0:
            g = -g
        if g not in (0, 1):
            row = [x // g for x in row]
        self.basis[piv] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.basis)


def rank(rows: Iterable[Sequence]) -> int:
    rr = RowReducer()
    for r in rows:
        rr.add(r)
    return rr.rank


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns (Fraction arithmetic)."""
    m = [[as_fraction(v) for v in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Solve the square-or-tall system ``a y = b`` exactly.

    Returns the unique solution, or ``None`` when the system is inconsistent
    or underdetermined.
    """
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bv] for r, bv in zip(a, b)]
    red, piv = rref(aug)
    if ncols in piv or len(piv) != ncols:
        return None
    return [red[k][-1] for k in range(ncols)]


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of ``{y : rows y = 0}``."""
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(red, piv):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def determinant(m: Sequence[Sequence]) -> Fraction:
    a = [[as_fraction(v) for v in r] for r in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


# ---------------------------------------------------------------------------
# point sets


def _bits(pt) -> Sequence[int]:
    if isinstance(pt, IncidenceVector):
        return pt.bits
    return pt


def affine_dimension(points: Sequence) -> int:
    """Dimension of the affine hull of the given points."""
    points = list(points)
    if not points:
        raise ValueError("affine dimension of an empty point set is undefined")
    return rank([1, *_bits(p)] for p in points) - 1


# ---------------------------------------------------------------------------
# equality system


def equality_system(d: Digraph, p: int) -> list[Inequality]:
    """Flow rows for every node followed by the cardinality row.

    In complete mode the rows fixing arcs into 0 and out of n at zero come
    first.
    """
    rows = []
    if d.mode == COMPLETE:
        for a in d.arcs:
            if a[1] == 0 or a[0] == d.n:
                rows.append(Inequality({a: 1}, EQ, 0, "model_row", {"kind": "zero", "arc": a}))
    for i in d.nodes:
        coeffs: dict[Arc, int] = {}
        for a in d.arcs:
            if a[0] == i:
                coeffs[a] = coeffs.get(a, 0) + 1
            if a[1] == i:
                coeffs[a] = coeffs.get(a, 0) - 1
        rhs = 1 if i == 0 else (-1 if i == d.n else 0)
        rows.append(Inequality(coeffs, EQ, rhs, "model_row", {"kind": "flow", "node": i}))
    rows.append(Inequality({a: 1 for a in d.arcs}, EQ, p, "model_row", {"kind": "cardinality"}))
    return rows


def cycle_equality_system(d: Digraph, p: int) -> list[Inequality]:
    """Flow conservation at each node plus ``x(A) = p`` on a cycle digraph."""
    rows = []
    for i in d.nodes:
        coeffs = {}
        for a in d.arcs:
            if a[0] == i:
                coeffs[a] = 1
            elif a[1] == i:
                coeffs[a] = -1
        rows.append(Inequality(coeffs, EQ, 0, "model_row", {"kind": "flow", "node": i}))
    rows.append(Inequality({a: 1 for a in d.arcs}, EQ, p, "model_row", {"kind": "cardinality"}))
    return rows


def equality_matrix(d: Digraph, eqs: Sequence[Inequality]) -> Matrix:
    return [r.vector(d) for r in eqs]


# ---------------------------------------------------------------------------
# unbalanced 1-trees


def _cycle_of_unicyclic(arcs: Sequence[Arc]) -> Optional[list[Arc]]:
    """Arcs of the unique cycle of a connected unicyclic multigraph."""
    alive = list(arcs)
    while True:
        deg: dict[int, int] = {}
        for t, h in alive:
            deg[t] = deg.get(t, 0) + 1
            deg[h] = deg.get(h, 0) + 1
        leaves = {v for v, k in deg.items() if k == 1}
        if not leaves:
            return alive
        alive = [a for a in alive if a[0] not in leaves and a[1] not in leaves]


def _connected(nodes: Iterable[int], arcs: Sequence[Arc]) -> bool:
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for t, h in arcs:
        parent[find(t)] = find(h)
    return len({find(v) for v in parent}) == 1


def cycle_balance(cycle: Sequence[Arc]) -> int:
    """Forward minus backward arcs when walking the cycle once."""
    if not cycle:
        return 0
    remaining = list(cycle[1:])
    start, cur = cycle[0]
    fwd = 1
    while remaining:
        for k, (t, h) in enumerate(remaining):
            if t == cur:
                fwd += 1
                cur = h
                break
            if h == cur:
                fwd -= 1
                cur = t
                break
        else:
            raise ValueError("arcs do not form a closed walk")
        remaining.pop(k)
    if cur != start:
        raise ValueError("arcs do not form a closed walk")
    return fwd


def is_unbalanced_1tree(d: Digraph, arcset: Iterable[Arc]) -> bool:
    """Spanning tree plus one arc whose cycle has unequal forward and backward counts.

    A pair of opposite arcs ``(i,j), (j,i)`` closes a cycle traversed forward
    twice, so it counts as unbalanced.
    """
    arcs = [tuple(a) for a in arcset]
    if len(set(arcs)) != len(arcs) or any(a not in d for a in arcs):
        return False
    if len(arcs) != d.n + 1 or not _connected(d.nodes, arcs):
        return False
    cyc = _cycle_of_unicyclic(arcs)
    return cycle_balance(cyc) != 0


def _flow_card_rows(d: Digraph) -> list[list[int]]:
    """Flow rows of nodes 0..n-1 and the cardinality row, as integer vectors.

    Node n's flow row is the negated sum of the others, so dropping it leaves
    an independent system of rank n+1.
    """
    rows = []
    for i in range(d.n):
        rows.append([(1 if a[0] == i else 0) - (1 if a[1] == i else 0) for a in d.arcs])
    rows.append([1] * len(d.arcs))
    return rows


def basis_check_equivalence(d: Digraph, arcset: Iterable[Arc]) -> bool:
    """Nonsingularity of the equality-system columns indexed by ``arcset``."""
    arcs = [tuple(a) for a in arcset]
    if len(arcs) != d.n + 1 or len(set(arcs)) != len(arcs):
        return False
    cols = [d.index(a) for a in arcs]
    sub = [[r[c] for c in cols] for r in _flow_card_rows(d)]
    return determinant(sub) != 0


@lru_cache(maxsize=None)
def canonical_tree(d: Digraph) -> tuple[Arc, ...]:
    """Lexicographically first unbalanced 1-tree of a restricted digraph."""
    rr = RowReducer()
    cols: list[int] = []
    rows = _flow_card_rows(d)
    # greedy column selection yields the lexicographically smallest basis
    for c in range(len(d.arcs)):
        if rr.add([r[c] for r in rows]):
            cols.append(c)
        if len(cols) == d.n + 1:
            break
    h = tuple(d.arcs[c] for c in cols)
    assert is_unbalanced_1tree(d, h)
    return h


def first_unbalanced_1tree_by_search(d: Digraph) -> tuple[Arc, ...]:
    """Scan index combinations in lexicographic order (slow reference)."""
    for combo in combinations(d.arcs, d.n + 1):
        if is_unbalanced_1tree(d, combo):
            return combo
    raise ValueError("no unbalanced 1-tree")


# ---------------------------------------------------------------------------
# equivalence


def normalize(ineq: Inequality, d: Digraph, p: int, h: Optional[Sequence[Arc]] = None,
              b=None) -> Inequality:
    """Add equation multiples so the coefficients on ``h`` equal ``b``.

    The result is in ``<=`` form.  ``h`` defaults to the canonical tree and
    ``b`` to zero.  Because ``h`` indexes a basis the multipliers are unique.
    """
    if d.mode == COMPLETE:
        raise ValueError("normalization is defined on the restricted digraph")
    h = list(canonical_tree(d) if h is None else h)
    if not basis_check_equivalence(d, h):
        raise ValueError("h is not a basis of the equality system")
    b = {} if b is None else b
    leq = ineq.as_leq()
    rows = _flow_card_rows(d)
    rhs = [Fraction(1)] + [Fraction(0)] * (d.n - 1) + [Fraction(p)]
    cols = [d.index(tuple(a)) for a in h]
    # multipliers lam with c_h - lam^T E_h = b_h
    a_mat = [[Fraction(rows[r][c]) for r in range(len(rows))] for c in cols]
    target = [leq.coeff(tuple(a)) - as_fraction(b.get(tuple(a), 0)) for a in h]
    lam = solve(a_mat, target)
    assert lam is not None, "multipliers are unique on a basis"
    coeffs = {}
    for k, a in enumerate(d.arcs):
        v = leq.coeff(a) - sum(lam[r] * rows[r][k] for r in range(len(rows)))
        if v:
            coeffs[a] = v
    new_rhs = leq.rhs - sum(l * r for l, r in zip(lam, rhs))
    return Inequality(coeffs, LE, new_rhs, ineq.family, ineq.params)


def _primitive(vec: Sequence[Fraction]) -> Optional[tuple]:
    nz = next((v for v in vec if v), None)
    if nz is None:
        return None
    s = abs(nz)
    return tuple(v / s for v in vec)


def equivalent(a: Inequality, b: Inequality, d: Digraph, p: int) -> bool:
    """Same face up to positive scaling and the equality system."""
    if a.sense == EQ or b.sense == EQ:
        raise ValueError("equivalence compares inequalities, not equations")
    na, nb = normalize(a, d, p), normalize(b, d, p)
    va = [na.coeff(x) for x in d.arcs] + [na.rhs]
    vb = [nb.coeff(x) for x in d.arcs] + [nb.rhs]
    pa, pb = _primitive(va), _primitive(vb)
    if pa is None or pb is None:
        return pa is None and pb is None
    # the first nonzero entries must agree in sign for a positive multiple
    return pa == pb
