"""Exact bounded-variable dual simplex over ``fractions.Fraction``.

Every structural variable is boxed, so the all-slack basis with each
variable parked at the bound its cost prefers is dual feasible from the
start.  The dual simplex then restores primal feasibility.  Rows added
later (cuts) and bound changes (branching) keep dual feasibility, so
re-optimisation is warm-started from the current basis.

Pricing is largest infeasibility; after a run of degenerate pivots it
switches to the smallest-index rule, which cannot cycle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import EQ, GE, LE, Inequality

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"

INF = None  # an absent upper bound


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: dict = field(default_factory=dict)
    duals: list = field(default_factory=list)
    pivots: int = 0


class DualSimplex:
    """``min c x`` over rows ``a x (<=,>=,==) b`` and bounds ``lo <= x <= hi``.

    ``columns`` names the structural variables; rows are ``Inequality``
    objects whose coefficient keys are column names.
    """

    def __init__(self, columns: Sequence, costs, lower=None, upper=None, degenerate_switch: int = 20):
        self.columns = list(columns)
        self.col = {c: k for k, c in enumerate(self.columns)}
        self.ns = len(self.columns)
        self.cost = [Fraction(costs.get(c, 0)) for c in self.columns]
        self.lo = [Fraction(0)] * self.ns if lower is None else [Fraction(v) for v in lower]
        self.hi = [Fraction(1)] * self.ns if upper is None else [Fraction(v) for v in upper]
        self.rows: list[list[Fraction]] = []   # tableau rows over all variables
        self.beta: list[Fraction] = []          # B^-1 b
        self.basis: list[int] = []
        self.value = [Fraction(0)] * self.ns   # current value of every variable
        self.red = list(self.cost)             # reduced costs
        self.row_sense: list[str] = []
        self.row_ineq: list[Inequality] = []
        self.degenerate_switch = degenerate_switch
        self.total_pivots = 0
        for j in range(self.ns):
            self.value[j] = self.lo[j] if self.red[j] >= 0 else self.hi[j]

    # -- structure ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.ns + len(self.rows)

    def _bounds(self, j: int):
        if j < self.ns:
            return self.lo[j], self.hi[j]
        sense = self.row_sense[j - self.ns]
        return Fraction(0), (Fraction(0) if sense == EQ else INF)

    def add_row(self, ineq: Inequality) -> None:
        """Append ``ineq`` with a fresh basic slack; the basis stays dual feasible."""
        sign = -1 if ineq.sense == GE else 1
        coeffs = {self.col[a]: sign * c for a, c in ineq.coeffs.items()}
        rhs = sign * ineq.rhs
        for r in self.rows:
            r.append(Fraction(0))
        new = [Fraction(0)] * (self.nvars + 1)
        for j, c in coeffs.items():
            new[j] = c
        new[-1] = Fraction(1)
        b = rhs
        # eliminate the current basic columns
        for i, bj in enumerate(self.basis):
            f = new[bj]
            if f:
                ri = self.rows[i]
                for k, v in enumerate(ri):
                    if v:
                        new[k] -= f * v
                b -= f * self.beta[i]
        self.rows.append(new)
        self.beta.append(b)
        self.row_sense.append(EQ if ineq.sense == EQ else LE)
        self.row_ineq.append(ineq)
        self.value.append(Fraction(0))
        self.red.append(Fraction(0))
        self.basis.append(len(self.value) - 1)
        self._refresh_basic()

    def set_bounds(self, j: int, lo, hi) -> None:
        self.lo[j], self.hi[j] = Fraction(lo), Fraction(hi)
        self.repark()

    def repark(self) -> None:
        basic = set(self.basis)
        for j in range(self.ns):
            if j in basic:
                continue
            lo, hi = self.lo[j], self.hi[j]
            d = self.red[j]
            if d > 0:
                self.value[j] = lo
            elif d < 0:
                self.value[j] = hi
            elif not lo <= self.value[j] <= hi:
                self.value[j] = lo
        self._refresh_basic()

    def _refresh_basic(self) -> None:
        basic = set(self.basis)
        nb = [(j, self.value[j]) for j in range(self.nvars) if j not in basic and self.value[j]]
        for i, bj in enumerate(self.basis):
            r = self.rows[i]
            v = self.beta[i]
            for j, xj in nb:
                if r[j]:
                    v -= r[j] * xj
            self.value[bj] = v

    # -- pivoting ----------------------------------------------------------

    def _pivot(self, i: int, j: int) -> None:
        r = self.rows[i]
        piv = r[j]
        inv = 1 / piv
        r[:] = [v * inv if v else v for v in r]
        self.beta[i] *= inv
        nz = [(k, v) for k, v in enumerate(r) if v]
        for h, rh in enumerate(self.rows):
            if h == i:
                continue
            f = rh[j]
            if f:
                for k, v in nz:
                    rh[k] -= f * v
                self.beta[h] -= f * self.beta[i]
        f = self.red[j]
        if f:
            for k, v in nz:
                self.red[k] -= f * v
        self.basis[i] = j
        self.total_pivots += 1

    def _infeasibility(self, i: int) -> Fraction:
        bj = self.basis[i]
        lo, hi = self._bounds(bj)
        v = self.value[bj]
        if v < lo:
            return lo - v
        if hi is not INF and v > hi:
            return v - hi
        return Fraction(0)

    def solve(self, max_pivots: int = 100000) -> LPResult:
        degenerate = 0
        pivots = 0
        while True:
            cand = [(self._infeasibility(i), i) for i in range(len(self.rows))]
            cand = [(v, i) for v, i in cand if v > 0]
            if not cand:
                return self._result(OPTIMAL, pivots)
            if degenerate >= self.degenerate_switch:
                _, i = min(cand, key=lambda t: (self.basis[t[1]], t[1]))
            else:
                _, i = max(cand, key=lambda t: (t[0], -self.basis[t[1]]))
            bj = self.basis[i]
            lo, hi = self._bounds(bj)
            below = self.value[bj] < lo
            r = self.rows[i]
            basic = set(self.basis)
            best = None
            for j in range(self.nvars):
                if j in basic:
                    continue
                a = r[j]
                if not a:
                    continue
                jlo, jhi = self._bounds(j)
                if jhi is not INF and jlo == jhi:
                    continue
                at_lo = self.value[j] == jlo
                at_hi = jhi is not INF and self.value[j] == jhi
                # x_bj = beta - sum a_j x_j; raise x_bj when below, lower it when above
                if below:
                    ok = (a < 0 and at_lo) or (a > 0 and at_hi)
                else:
                    ok = (a > 0 and at_lo) or (a < 0 and at_hi)
                if not ok:
                    continue
                ratio = abs(self.red[j] / a)
                key = (ratio, j)
                if best is None or key < best[0]:
                    best = (key, j)
            if best is None:
                return self._result(INFEASIBLE, pivots)
            j = best[1]
            degenerate = degenerate + 1 if best[0][0] == 0 else 0
            target = lo if below else hi
            self._pivot(i, j)
            self.value[bj] = target
            self._refresh_basic()
            pivots += 1
            if pivots > max_pivots:
                raise RuntimeError("pivot limit reached")

    def _result(self, status: str, pivots: int) -> LPResult:
        if status != OPTIMAL:
            return LPResult(status, pivots=pivots)
        x = {c: self.value[k] for k, c in enumerate(self.columns)}
        val = sum((self.cost[k] * self.value[k] for k in range(self.ns)), Fraction(0))
        duals = []
        for i, q in enumerate(self.row_ineq):
            y = -self.red[self.ns + i]  # multiplier of the <=-oriented row
            duals.append(-y if q.sense == GE else y)
        return LPResult(OPTIMAL, val, x, duals, pivots)


def dual_bound(costs, rows: Sequence[Inequality], duals: Sequence[Fraction], columns, lower, upper) -> Fraction:
    """Lagrangian bound ``min over the box of c x + sum y_i (b_i - a_i x)``.

    Valid (a lower bound on the optimum) whenever ``y_i >= 0`` on ``>=``
    rows and ``y_i <= 0`` on ``<=`` rows.
    """
    red = {c: Fraction(costs.get(c, 0)) for c in columns}
    total = Fraction(0)
    for q, y in zip(rows, duals):
        total += y * q.rhs
        for a, c in q.coeffs.items():
            red[a] -= y * c
    for k, c in enumerate(columns):
        total += red[c] * (lower[k] if red[c] >= 0 else upper[k])
    return total


def lp_solve(columns: Sequence, costs, rows: Sequence[Inequality], lower=None, upper=None) -> LPResult:
    lp = DualSimplex(columns, costs, lower, upper)
    for q in rows:
        lp.add_row(q)
    return lp.solve()
