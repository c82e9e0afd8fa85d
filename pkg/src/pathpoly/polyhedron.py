"""Exact vertex enumeration for small polyhedra by the double description method.

The polyhedron ``{x : E x = e, G x <= g}`` is parametrised over the affine
hull of its equations, homogenised with an extra coordinate ``t``, and the
extreme rays of the resulting cone are generated one constraint at a time.
Rays with ``t > 0`` are vertices, rays with ``t = 0`` are recession
directions.  Adjacency uses the combinatorial zero-set test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .linalg import RowReducer, _integer_row, nullspace, rank, rref


def _primitive(v: list[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        if x:
            g = math.gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    return tuple(v)


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x)


def _initial_basis(rows: list[list[int]], dim: int) -> list[int]:
    rr = RowReducer()
    picked: list[int] = []
    for i, r in enumerate(rows):
        if rr.add(r):
            picked.append(i)
            if len(picked) == dim:
                break
    return picked


def extreme_rays(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{z : rows z <= 0}``.

    Raises ``ValueError`` if the cone is not pointed (the rows do not have
    full column rank).
    """
    rows = [list(_integer_row(r)) for r in rows]
    if not rows:
        raise ValueError("cone without constraints is not pointed")
    dim = len(rows[0])
    if rank(rows) < dim:
        raise ValueError("cone is not pointed")
    basis = _initial_basis(rows, dim)
    bmat = [[Fraction(x) for x in rows[i]] for i in basis]
    # columns of -B^{-1}
    aug = [r + [Fraction(int(i == j)) for j in range(dim)] for i, r in enumerate(bmat)]
    red, _ = rref(aug)
    inv = [r[dim:] for r in red]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    for j in range(dim):
        col = [-inv[i][j] for i in range(dim)]
        rays.append(_primitive(_integer_row(col)))
    for j in range(dim):
        zeros.append(sum(1 << basis[i] for i in range(dim) if i != j))
    done = set(basis)
    for idx, a in enumerate(rows):
        if idx in done:
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        new_rays = [r for r, v in zip(rays, vals) if v <= 0]
        new_zeros = [z | (1 << idx) if v == 0 else z for z, v in zip(zeros, vals) if v <= 0]
        for kp in pos:
            for kn in neg:
                common = zeros[kp] & zeros[kn]
                if bin(common).count("1") < dim - 2:
                    continue
                if any(k != kp and k != kn and (zeros[k] & common) == common for k in range(len(rays))):
                    continue
                vp, vn = vals[kp], vals[kn]
                comb = [vp * y - vn * x for x, y in zip(rays[kp], rays[kn])]
                new_rays.append(_primitive(comb))
                new_zeros.append(common | (1 << idx))
        rays, zeros = new_rays, new_zeros
        done.add(idx)
    return rays


@dataclass
class PolyhedronInfo:
    empty: bool = False
    pointed: bool = True
    vertices: list = field(default_factory=list)
    rays: list = field(default_factory=list)
    dimension: Optional[int] = None

    @property
    def bounded(self) -> bool:
        return not self.empty and self.pointed and not self.rays


def enumerate_vertices(eq_rows: Sequence[Sequence], eq_rhs: Sequence, le_rows: Sequence[Sequence],
                       le_rhs: Sequence, ncols: int) -> PolyhedronInfo:
    """Vertices and recession rays of ``{x : eq_rows x = eq_rhs, le_rows x <= le_rhs}``.

    Vertices are returned as Fraction tuples in the original coordinates.
    When the polyhedron contains a line, ``pointed`` is False and no vertex
    list is produced.
    """
    eq_rows = [[Fraction(v) for v in r] for r in eq_rows]
    if eq_rows:
        aug = [r + [Fraction(b)] for r, b in zip(eq_rows, eq_rhs)]
        red, piv = rref(aug)
        if ncols in piv:
            return PolyhedronInfo(empty=True)
        x0 = [Fraction(0)] * ncols
        for r, pc in zip(red, piv):
            x0[pc] = r[-1]
        basis = nullspace([r[:-1] for r in red], ncols)
    else:
        x0 = [Fraction(0)] * ncols
        basis = [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    k = len(basis)
    cone_rows = []
    for r, b in zip(le_rows, le_rhs):
        r = [Fraction(v) for v in r]
        coeffs = [sum(r[i] * v[i] for i in range(ncols) if r[i]) for v in basis]
        slack = Fraction(b) - sum(r[i] * x0[i] for i in range(ncols) if r[i])
        cone_rows.append(coeffs + [-slack])
    cone_rows.append([Fraction(0)] * k + [Fraction(-1)])
    int_rows = [_integer_row(r) for r in cone_rows]
    if rank(int_rows) < k + 1:
        return PolyhedronInfo(pointed=False, dimension=None)
    rays = extreme_rays(int_rows)
    info = PolyhedronInfo()
    for r in rays:
        t = r[-1]
        y = r[:-1]
        if t < 0:
            continue
        if t == 0:
            if any(y):
                info.rays.append(tuple(sum(Fraction(y[j]) * basis[j][i] for j in range(k)) for i in range(ncols)))
            continue
        pt = tuple(x0[i] + sum(Fraction(y[j], t) * basis[j][i] for j in range(k) if y[j]) for i in range(ncols))
        info.vertices.append(pt)
    if not info.vertices:
        info.empty = True
    info.vertices.sort()
    return info
