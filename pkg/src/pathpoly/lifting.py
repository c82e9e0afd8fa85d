"""Constructions that carry inequalities to related polytopes.

* ``lift_to_cycle``: contract 0 and n and lift into the p-cycle polytope.
* ``clone_node_lift``: add a copy of an internal node.
* ``set_lift``: add a set of new nodes and raise the path length with them.
* ``relax_lift``: pass to paths of length at most (or at least) p.
* ``to_undirected``: transcribe a symmetric-up-to-equations inequality to edges.

Every extremal constant (gamma, delta_k, t, mu) is computed by enumeration.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional

from .core import COMPLETE, GE, LE, Arc, Digraph, Inequality, cycle_digraph
from .enumeration import iter_paths, max_over_cycles, max_over_paths, seq_arcs
from .formats import format_fraction
from .lab import check_facet, check_T8_preconditions, check_T9_preconditions
from .linalg import solve


class LiftError(ValueError):
    """A lifting hypothesis failed; ``report`` carries the evidence."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def _source(ineq: Inequality) -> dict:
    return {"source_family": ineq.family}


# ---------------------------------------------------------------------------
# path polytope -> p-cycle polytope


def contract_arc(d: Digraph, arc: Arc) -> Arc:
    """Image of an arc when 0 and n merge into node 0 of the cycle digraph."""
    i, j = arc
    return (i, 0) if j == d.n else (i, j)


def lift_to_cycle(ineq: Inequality, d: Digraph, p: int) -> tuple[Inequality, Digraph]:
    """Lift to the p-cycle polytope on the complete digraph over ``{0..n-1}``.

    The merged source/terminus is node 0, so the copied coefficients
    ``a_{merged,i} = a_{0i}`` are already in place.  Returns the lifted
    inequality (``<=`` form) and the cycle digraph.
    """
    leq = ineq.as_leq()
    dn = cycle_digraph(d.n)
    coeffs = {contract_arc(d, a): c for a, c in leq.coeffs.items()}
    opt = max_over_cycles(dn, coeffs, p)
    if opt.value is None:
        raise LiftError(f"no {p}-cycles on {d.n} nodes")
    gamma = opt.value
    for a in dn.out_arcs(0):
        coeffs[a] = coeffs.get(a, 0) + gamma - leq.rhs
    params = {**_source(ineq), "gamma": format_fraction(gamma)}
    return Inequality(coeffs, LE, gamma, "cycle_lift", params), dn


# ---------------------------------------------------------------------------
# node cloning


def clone_node_lift(ineq: Inequality, d: Digraph, p: int, k: int, check: bool = True) -> tuple[Inequality, Digraph]:
    """Clone internal node ``k``.

    In the larger digraph the clone is node ``n`` and the old terminus
    becomes ``n+1``; all other labels are unchanged.
    """
    if k not in d.internal:
        raise LiftError("the cloned node must be internal")
    leq = ineq.as_leq()
    if check:
        rep = check_T8_preconditions(leq, d, p, k)
        if not rep.ok:
            raise LiftError("node-cloning hypotheses fail", rep)
        delta = rep.delta_k
    else:
        opt = max_over_paths(d, leq.coeffs, p - 1, through=k)
        if opt.value is None:
            raise LiftError(f"no path of length {p - 1} through {k}")
        delta = opt.value
    n = d.n
    big = Digraph(n + 1, d.mode)
    clone, term = n, n + 1

    def relabel(v: int) -> int:
        return term if v == n else v

    coeffs: dict = {}
    for (i, j), c in leq.coeffs.items():
        coeffs[(relabel(i), relabel(j))] = c
    for i in range(n):
        if i != k:
            coeffs[(i, clone)] = leq.coeff((i, k))
    for j in range(1, n + 1):
        if j != k:
            coeffs[(clone, relabel(j))] = leq.coeff((k, j))
    coeffs[(k, clone)] = leq.rhs - delta
    coeffs[(clone, k)] = leq.rhs - delta
    params = {**_source(ineq), "k": k, "delta_k": format_fraction(delta)}
    return Inequality(coeffs, LE, leq.rhs, "clone_lift", params), big


def delete_node(ineq: Inequality, big: Digraph, node: int) -> tuple[Inequality, Digraph]:
    """Drop ``node`` (internal) and relabel the rest consecutively."""
    small = Digraph(big.n - 1, big.mode)

    def lab(v: int) -> int:
        return v - 1 if v > node else v

    coeffs = {(lab(i), lab(j)): c for (i, j), c in ineq.coeffs.items() if node not in (i, j)}
    return Inequality(coeffs, ineq.sense, ineq.rhs, ineq.family, ineq.params), small


# ---------------------------------------------------------------------------
# node-set lifting


def set_lift(ineq: Inequality, d: Digraph, p: int, R: Iterable[int], check: bool = True) -> tuple[Inequality, Digraph]:
    """Add the nodes ``R`` (labels in the larger digraph) and lift to length ``p + |R|``.

    Old internal nodes take the remaining internal labels in increasing
    order; the terminus becomes ``n + |R|``.
    """
    R = tuple(sorted(set(R)))
    m = len(R)
    leq = ineq.as_leq()
    if any(c < 0 for c in leq.coeffs.values()):
        raise LiftError("set lifting needs nonnegative coefficients")
    if check:
        rep = check_T9_preconditions(leq, d, p)
        if not rep.ok:
            raise LiftError("set-lifting hypotheses fail", rep)
    big = Digraph(d.n + m, d.mode)
    if m == 0 or any(r not in big.internal for r in R):
        raise LiftError("R must be a nonempty set of internal labels of the larger digraph")
    keep = [v for v in big.internal if v not in R]
    mapping = {0: 0, d.n: big.n, **{old: new for old, new in zip(d.internal, keep)}}
    base = {(mapping[i], mapping[j]): c for (i, j), c in leq.coeffs.items()}
    q = p + m
    rset = set(R)
    t: Optional[Fraction] = None
    witnesses = []
    for s in iter_paths(big, q):
        r = sum(1 for v in s if v in rset)
        val = sum((base.get(a, 0) for a in seq_arcs(s)), Fraction(0))
        if r == m:
            if val > leq.rhs:
                raise LiftError("a path through all of R violates the base inequality for every t")
            continue
        bound = Fraction(val - leq.rhs, m - r)
        if t is None or bound > t:
            t = bound
        witnesses.append((s, r, val))
    if t is None:
        raise LiftError("no paths miss a node of R")
    if m >= 2:
        tight_mid = any(0 < r < m and val + t * r == leq.rhs + m * t for _, r, val in witnesses)
        if not tight_mid:
            raise LiftError("no tight path visits some but not all of R")
    coeffs = dict(base)
    for j in R:
        for a in big.out_arcs(j):
            coeffs[a] = coeffs.get(a, 0) + t
    params = {**_source(ineq), "R": R, "t": format_fraction(t)}
    return Inequality(coeffs, LE, leq.rhs + m * t, "set_lift", params), big


# ---------------------------------------------------------------------------
# cardinality relaxation


def relax_lift(ineq: Inequality, d: Digraph, p: int, direction: str, check: bool = True) -> Inequality:
    """``c x + mu x(A) <= c0 + mu p`` valid for every length on one side of ``p``.

    ``mu`` is the smallest such value for ``lower`` (lengths up to p) and
    the largest for ``upper`` (lengths from p).
    """
    leq = ineq.as_leq()
    if check and not check_facet(leq, d, p).is_facet:
        raise LiftError("relaxation lifting starts from a facet")
    low = 1 if d.mode == COMPLETE else 2
    if direction == "lower":
        lengths = range(low, p)
    elif direction == "upper":
        lengths = range(p + 1, d.n + 1)
    else:
        raise ValueError("direction must be 'lower' or 'upper'")
    mu: Optional[Fraction] = None
    for q in lengths:
        for s in iter_paths(d, q):
            val = leq.lhs_on(seq_arcs(s))
            if direction == "lower":
                b = Fraction(val - leq.rhs, p - q)
                mu = b if mu is None or b > mu else mu
            else:
                b = Fraction(leq.rhs - val, q - p)
                mu = b if mu is None or b < mu else mu
    if mu is None:
        mu = Fraction(0)
    coeffs = {a: leq.coeff(a) + mu for a in d.arcs}
    params = {**_source(ineq), "direction": direction, "mu": format_fraction(mu)}
    return Inequality(coeffs, LE, leq.rhs + mu * p, "relax_lift", params)


# ---------------------------------------------------------------------------
# undirected transcription


def is_pseudo_symmetric(ineq: Inequality, d: Digraph) -> bool:
    return all(ineq.coeff((i, j)) == ineq.coeff((j, i))
               for i in d.internal for j in d.internal if i < j)


def _mode_choice(values: list[Fraction]) -> Fraction:
    """Most frequent value; ties go to the one of smallest modulus, then the smaller."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return min(counts, key=lambda v: (-counts[v], abs(v), v))


def _primitive_integer(coeffs: dict, rhs: Fraction) -> tuple[dict, Fraction]:
    vals = [*coeffs.values(), rhs]
    den = 1
    for v in vals:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    g = g or 1
    scale = Fraction(den, g)
    return {e: c * scale for e, c in coeffs.items()}, rhs * scale


def symmetrize(ineq: Inequality, d: Digraph) -> Optional[Inequality]:
    """Edge inequality (``<=`` form) with the same tight paths, or ``None``.

    Adds flow-row multiples ``pi`` so that ``c_ij + pi_i - pi_j`` agrees with
    ``c_ji + pi_j - pi_i`` on every internal pair; the free multiples at 0
    and n are chosen to zero as many end edges as possible.  Coefficients
    are scaled to coprime integers.
    """
    if d.mode == COMPLETE:
        raise ValueError("transcription works on the restricted digraph")
    base = ineq.as_leq()
    inner = list(d.internal)
    n = d.n
    col = {v: k for k, v in enumerate(inner)}
    rows, rhs = [], []
    for i in inner:
        for j in inner:
            if i < j:
                r = [Fraction(0)] * len(inner)
                r[col[i]], r[col[j]] = Fraction(1), Fraction(-1)
                rows.append(r)
                rhs.append((base.coeff((j, i)) - base.coeff((i, j))) / 2)
    anchor = [Fraction(0)] * len(inner)
    anchor[0] = Fraction(1)
    sol = solve(rows + [anchor], rhs + [Fraction(0)])
    if sol is None:
        return None
    pot = {v: sol[col[v]] for v in inner}
    pot[0] = -_mode_choice([base.coeff((0, i)) - pot[i] for i in inner])
    pot[n] = _mode_choice([base.coeff((i, n)) + pot[i] for i in inner])
    coeffs: dict = {}
    for (i, j) in d.arcs:
        coeffs[(min(i, j), max(i, j))] = base.coeff((i, j)) + pot[i] - pot[j]
    coeffs, rhs0 = _primitive_integer({e: c for e, c in coeffs.items() if c}, base.rhs + pot[0] - pot[n])
    return Inequality(coeffs, LE, rhs0, "undirected", _source(ineq))


def _edge_form(ineq: Inequality, g, p: int):
    from .undirected import gen_udegree, gen_umax_cut, gen_umin_cut, gen_uone_sided_min_cut

    fam, pr = ineq.family, ineq.params
    if fam == "degree":
        return gen_udegree(g, pr["node"])
    if fam == "min_cut":
        return gen_umin_cut(g, pr["S"])
    if fam == "one_sided_min_cut":
        return gen_uone_sided_min_cut(g, pr["S"], pr["l"])
    if fam == "gen_max_cut" and not pr["R"]:
        S, T, variant = pr["S"], pr["T"], pr["variant"]
        rhs = int(ineq.rhs)
        side = S if 0 in S else T
        # crossings of a path through the cut, from the directed count of S->T arcs
        bound = {"0n_in_S": 2 * rhs, "0n_in_T": 2 * rhs,
                 "0_in_S_n_in_T": 2 * rhs - 1, "0_in_T_n_in_S": 2 * rhs + 1}[variant]
        return gen_umax_cut(g, side, p, bound)
    return None


def to_undirected(ineq: Inequality, d: Digraph, p: int) -> Optional[Inequality]:
    """Undirected counterpart, or ``None`` when the inequality is not covered.

    Literally pseudo-symmetric inequalities are copied edge by edge.  The
    degree, min-cut, one-sided min-cut and max-cut families (the latter
    with ``R`` empty) map to their edge forms; each such form is checked
    against ``symmetrize`` modulo the equations.  Anything else is refused.
    """
    from .undirected import UGraph, uequivalent

    if d.mode == COMPLETE:
        raise ValueError("transcription works on the restricted digraph")
    g = UGraph(d.n)
    if is_pseudo_symmetric(ineq, d):
        coeffs: dict = {}
        for (i, j), c in ineq.coeffs.items():
            coeffs[(min(i, j), max(i, j))] = c
        return Inequality(coeffs, ineq.sense, ineq.rhs, "undirected",
                          {**_source(ineq), "source_params": ineq.params})
    form = _edge_form(ineq, g, p)
    if form is None:
        return None
    sym = symmetrize(ineq, d)
    if sym is None or not uequivalent(form, sym, g, p):
        raise AssertionError(f"edge form of {ineq.family} disagrees with its symmetrization")
    return form.with_provenance(form.family, {**form.params, **_source(ineq)})
