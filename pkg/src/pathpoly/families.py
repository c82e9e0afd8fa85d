"""Inequality families for the (0,n)-p-path polytope and closed-form verdicts.

Each generator returns an ``Inequality`` whose ``family``/``params`` record
how it was built.  ``predicted_validity`` and ``predicted_facet`` read those
params back and evaluate the known conditions without any enumeration.
Facet verdicts are only issued for ``4 <= p <= n-1``; elsewhere they are
``unknown``.
"""
from __future__ import annotations

from enum import Enum
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, Sequence

from .core import COMPLETE, EQ, GE, LE, Arc, Digraph, Inequality
from .linalg import equality_system


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    SUFFICIENT = "sufficient-true"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.TRUE if flag else cls.FALSE


FAMILIES = ("model_row", "nonneg", "degree", "min_cut", "one_sided_min_cut", "gen_max_cut",
            "broom", "jump", "card_path", "extra_p4")


def _add(coeffs: dict, arcs: Iterable[Arc], value) -> None:
    for a in arcs:
        coeffs[a] = coeffs.get(a, 0) + value


def _nodeset(nodes: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(nodes)))


def _check_nodes(d: Digraph, nodes: Iterable[int], what: str) -> None:
    bad = [v for v in nodes if v not in d.nodes]
    if bad:
        raise ValueError(f"{what} contains nodes {bad} outside 0..{d.n}")


# ---------------------------------------------------------------------------
# generators


def gen_nonneg(d: Digraph, arc: Arc) -> Inequality:
    arc = tuple(arc)
    if arc not in d:
        raise ValueError(f"arc {arc} not in the digraph")
    return Inequality({arc: 1}, GE, 0, "nonneg", {"arc": arc})


def gen_degree(d: Digraph, j: int) -> Inequality:
    if j not in d.internal:
        raise ValueError(f"degree constraints are for internal nodes, got {j}")
    return Inequality({a: 1 for a in d.out_arcs(j)}, LE, 1, "degree", {"node": j})


def gen_upper_bound(d: Digraph, arc: Arc) -> Inequality:
    return Inequality({tuple(arc): 1}, LE, 1, "model_row", {"kind": "upper", "arc": tuple(arc)})


def gen_min_cut(d: Digraph, S: Iterable[int]) -> Inequality:
    """``x((S : V minus S)) >= 1``."""
    S = _nodeset(S)
    _check_nodes(d, S, "S")
    if 0 not in S or d.n not in S:
        raise ValueError("S must contain both 0 and n")
    if len(S) == d.n + 1:
        raise ValueError("S must be a proper subset of V")
    rest = [v for v in d.nodes if v not in S]
    return Inequality({a: 1 for a in d.cut(S, rest)}, GE, 1, "min_cut", {"S": S})


def gen_one_sided_min_cut(d: Digraph, S: Iterable[int], l: int) -> Inequality:
    """``x((S : V minus S)) - x(out(l)) >= 0`` for ``l`` outside ``S``."""
    S = _nodeset(S)
    _check_nodes(d, S, "S")
    if 0 not in S or d.n not in S:
        raise ValueError("S must contain both 0 and n")
    if l in S or l not in d.nodes:
        raise ValueError(f"l={l} must be a node outside S")
    rest = [v for v in d.nodes if v not in S]
    coeffs: dict = {}
    _add(coeffs, d.cut(S, rest), 1)
    _add(coeffs, d.out_arcs(l), -1)
    return Inequality(coeffs, GE, 0, "one_sided_min_cut", {"S": S, "l": l})


def max_cut_variant(S: Sequence[int], T: Sequence[int], n: int) -> str:
    """Which of the four right-hand-side rules applies, keyed on where 0 and n sit."""
    s0, sn = 0 in S, n in S
    t0, tn = 0 in T, n in T
    if s0 and sn:
        return "0n_in_S"
    if t0 and tn:
        return "0n_in_T"
    if s0 and tn:
        return "0_in_S_n_in_T"
    if t0 and sn:
        return "0_in_T_n_in_S"
    raise ValueError("0 and n must both lie in S or T")


def max_cut_rhs(variant: str, p: int, r: int) -> int:
    return {"0n_in_S": (p + r) // 2, "0n_in_T": (p + r) // 2,
            "0_in_S_n_in_T": (p + r + 1) // 2, "0_in_T_n_in_S": (p + r - 1) // 2}[variant]


def gen_gen_max_cut(d: Digraph, R: Iterable[int], S: Iterable[int], T: Iterable[int], p: int) -> Inequality:
    """``x((S:T)) + sum over R of x(out(i)) <= rhs`` with the variant's rounding."""
    R, S, T = _nodeset(R), _nodeset(S), _nodeset(T)
    for name, blk in (("R", R), ("S", S), ("T", T)):
        _check_nodes(d, blk, name)
    if set(R) & set(S) or set(R) & set(T) or set(S) & set(T):
        raise ValueError("R, S, T must be pairwise disjoint")
    if len(R) + len(S) + len(T) != d.n + 1:
        raise ValueError("R, S, T must cover V")
    if 0 in R or d.n in R:
        raise ValueError("0 and n must lie in S or T")
    variant = max_cut_variant(S, T, d.n)
    coeffs: dict = {}
    _add(coeffs, d.cut(S, T), 1)
    for i in R:
        _add(coeffs, d.out_arcs(i), 1)
    rhs = max_cut_rhs(variant, p, len(R))
    return Inequality(coeffs, LE, rhs, "gen_max_cut",
                      {"R": R, "S": S, "T": T, "p": p, "variant": variant})


def gen_jump(d: Digraph, blocks: Sequence[Iterable[int]]) -> Inequality:
    """Jump inequality over an ordered partition ``S_0={0}, ..., S_{p+1}={n}``."""
    blocks = [_nodeset(b) for b in blocks]
    p = len(blocks) - 2
    if p < 2:
        raise ValueError("a jump partition needs at least four blocks")
    if blocks[0] != (0,) or blocks[-1] != (d.n,):
        raise ValueError("the first block must be {0} and the last {n}")
    seen: list[int] = [v for b in blocks for v in b]
    if sorted(seen) != list(d.nodes):
        raise ValueError("blocks must partition V")
    if any(not b for b in blocks):
        raise ValueError("blocks must be nonempty")
    coeffs: dict = {}
    for i in range(p):
        for j in range(i + 2, p + 2):
            _add(coeffs, d.cut(blocks[i], blocks[j]), 1)
    back_src = set(blocks[p - 1]) | set(blocks[p])
    back_dst = set(blocks[1]) | set(blocks[2])
    _add(coeffs, d.cut(back_src, back_dst), -1)
    return Inequality(coeffs, GE, 1, "jump", {"blocks": tuple(blocks), "p": p})


def bid(path: Sequence[int]) -> list[Arc]:
    """Arcs of ``path`` together with their reversals."""
    arcs = list(zip(path, path[1:]))
    return arcs + [(j, i) for i, j in arcs]


def gen_card_path(d: Digraph, path: Sequence[int]) -> Inequality:
    """Interior in-degree sum minus ``x(bid(P))``, ``>= 0``; ``P`` has p nodes."""
    path = tuple(path)
    if len(path) < 3:
        raise ValueError("the path needs at least two arcs")
    if len(set(path)) != len(path):
        raise ValueError("the path must be simple")
    if any(v not in d.internal for v in path):
        raise ValueError("the path must use internal nodes only")
    coeffs: dict = {}
    for i in path[1:-1]:
        _add(coeffs, d.in_arcs(i), 1)
    _add(coeffs, bid(path), -1)
    return Inequality(coeffs, GE, 0, "card_path", {"path": path, "p": len(path)})


def gen_broom(d: Digraph, i: int, j: int, k: int) -> Inequality:
    """``x(out(i)) - x_ji - x_ik >= 0``."""
    if i not in d.internal:
        raise ValueError("the broom centre must be internal")
    if not ((j == k and j in d.internal and j != i) or (j == 0 and k == d.n)):
        raise ValueError("need j = k internal, or j = 0 and k = n")
    coeffs: dict = {}
    _add(coeffs, d.out_arcs(i), 1)
    _add(coeffs, [(j, i)], -1)
    _add(coeffs, [(i, k)], -1)
    return Inequality(coeffs, GE, 0, "broom", {"i": i, "j": j, "k": k})


def gen_extra_p4(d: Digraph, p: int = 4, repaired: bool = False) -> Inequality:
    """A sporadic p = 4 inequality built on nodes 1, 2, 3 and ``T = V - {0,1,2,3,n}``.

    The default coefficients are the published ones, which are violated by
    the path (0,2,3,1,n).  ``repaired=True`` drops the ``x_31`` term and
    gives the arcs ``({2}:T)`` coefficient +1; that variant is a facet for
    n = 5, 6, 7.
    """
    if p != 4:
        raise ValueError("this inequality is defined for p = 4 only")
    n = d.n
    T = [v for v in d.internal if v not in (1, 2, 3)]
    if n < 4 or not T:
        raise ValueError("needs T = V minus {0,1,2,3,n} nonempty")
    coeffs: dict = {}
    singles = [((0, 3), 1), ((3, n), -1), ((1, 2), 3), ((2, 1), -1), ((1, 3), 2), ((2, n), -2)]
    if not repaired:
        singles.append(((3, 1), -2))
    for arc, c in singles:
        _add(coeffs, [arc], c)
    _add(coeffs, d.cut(T, [3]), 2)
    _add(coeffs, d.inside(T), 1)
    _add(coeffs, d.cut([1], T), 1)
    _add(coeffs, d.cut(T, [1]), -1)
    _add(coeffs, d.cut(T, [2]), 1)
    _add(coeffs, d.cut([2], T), 1 if repaired else -1)
    params = {"T": tuple(T), "p": 4}
    if repaired:
        params["repaired"] = True
    return Inequality(coeffs, GE, 0, "extra_p4", params)


def gen_model_rows(d: Digraph, p: int) -> list[Inequality]:
    """Equations, degree rows, one-sided min-cut rows and 0/1 bounds of the IP model."""
    rows = list(equality_system(d, p))
    rows += [gen_degree(d, j) for j in d.internal]
    internal = list(d.internal)
    for size in range(1, d.n - 3):
        # |S| = size + 2 ranges over 3..n-2
        for extra in combinations(internal, size):
            S = (0, *extra, d.n)
            for l in internal:
                if l not in extra:
                    rows.append(gen_one_sided_min_cut(d, S, l))
    rows += [gen_nonneg(d, a) for a in d.arcs]
    rows += [gen_upper_bound(d, a) for a in d.arcs]
    return rows


# ---------------------------------------------------------------------------
# verdicts


def _in_core_range(d: Digraph, p: int) -> bool:
    return 4 <= p <= d.n - 1 and d.mode != COMPLETE


def predicted_validity(ineq: Inequality, d: Digraph, p: int) -> Verdict:
    f, pr = ineq.family, ineq.params
    if f in ("nonneg", "degree", "one_sided_min_cut", "broom"):
        return Verdict.TRUE
    if f == "model_row":
        return Verdict.TRUE if pr.get("kind") != "cardinality" or ineq.rhs == p else Verdict.UNKNOWN
    if f == "min_cut":
        return Verdict.of(len(pr["S"]) <= p)
    if f == "gen_max_cut":
        return Verdict.TRUE if p >= 4 and pr["p"] == p else Verdict.UNKNOWN
    if f == "jump":
        return Verdict.TRUE if pr["p"] == p else Verdict.UNKNOWN
    if f == "card_path":
        return Verdict.TRUE if pr["p"] == p else Verdict.UNKNOWN
    if f == "extra_p4":
        # claimed facet at p = 4, hence claimed valid
        return Verdict.TRUE if p == 4 and not pr.get("repaired") else Verdict.UNKNOWN
    return Verdict.UNKNOWN


def _max_cut_facet(pr, n: int, p: int) -> bool:
    R, S, T = pr["R"], pr["S"], pr["T"]
    r = len(R)
    half = (p - r) / 2
    v = pr["variant"]
    if v in ("0n_in_S", "0n_in_T"):
        if (p + r) % 2 != 1:
            return False
        if v == "0n_in_S":
            big, other, small = len([s for s in S if s != n]), len(T), len(S)
        else:
            big, other, small = len(S), len([t for t in T if t != 0]), len(T)
        if not (big > half and other > half):
            return False
        return (p == r + 3 and r >= 2 and small == 3) or p >= r + 5
    return (p + r) % 2 == 0 and p >= r + 4 and len(S) > half and len(T) > half


def _card_path_facet(n: int, p: int) -> bool:
    return (p in (4, 5) and n >= p + 2) or (p >= 6 and n >= 2 * p - 3)


def predicted_facet(ineq: Inequality, d: Digraph, p: int) -> Verdict:
    f, pr = ineq.family, ineq.params
    n = d.n
    if f == "model_row":
        if ineq.sense == EQ:
            return Verdict.FALSE
        return Verdict.UNKNOWN
    if not _in_core_range(d, p):
        return Verdict.UNKNOWN
    if f in ("nonneg", "degree"):
        return Verdict.TRUE
    if f == "min_cut":
        return Verdict.of(3 <= len(pr["S"]) <= p and n + 1 - len(pr["S"]) >= 2)
    if f == "one_sided_min_cut":
        if len(pr["S"]) == 2:
            # S = {0, n}: the row is 1 - x(out(l)) >= 0, the degree constraint of l
            return Verdict.TRUE
        return Verdict.of(len(pr["S"]) >= p + 1 and n + 1 - len(pr["S"]) >= 2)
    if f == "gen_max_cut":
        if pr["p"] != p:
            return Verdict.UNKNOWN
        return Verdict.of(_max_cut_facet(pr, n, p))
    if f == "jump":
        if pr["p"] != p:
            return Verdict.UNKNOWN
        if all(len(b) >= 2 for b in pr["blocks"][1:-1]):
            return Verdict.SUFFICIENT
        return Verdict.UNKNOWN
    if f == "card_path":
        if pr["p"] != p:
            return Verdict.UNKNOWN
        return Verdict.of(_card_path_facet(n, p))
    if f == "extra_p4":
        return Verdict.TRUE if p == 4 and not pr.get("repaired") else Verdict.UNKNOWN
    return Verdict.UNKNOWN


# ---------------------------------------------------------------------------
# parameter sweeps


def iter_min_cuts(d: Digraph) -> Iterator[Inequality]:
    internal = list(d.internal)
    for size in range(0, len(internal)):
        for extra in combinations(internal, size):
            yield gen_min_cut(d, (0, *extra, d.n))


def iter_one_sided_min_cuts(d: Digraph) -> Iterator[Inequality]:
    internal = list(d.internal)
    for size in range(0, len(internal)):
        for extra in combinations(internal, size):
            for l in internal:
                if l not in extra:
                    yield gen_one_sided_min_cut(d, (0, *extra, d.n), l)


def iter_gen_max_cuts(d: Digraph, p: int, max_r: int = 2, variant: str = None) -> Iterator[Inequality]:
    """All partitions with |R| <= max_r, R internal, S and T nonempty."""
    internal = list(d.internal)
    ends = {"0n_in_S": ((0, d.n), ()), "0n_in_T": ((), (0, d.n)),
            "0_in_S_n_in_T": ((0,), (d.n,)), "0_in_T_n_in_S": ((d.n,), (0,))}
    keys = [variant] if variant else list(ends)
    for key in keys:
        s_end, t_end = ends[key]
        for r in range(0, max_r + 1):
            for R in combinations(internal, r):
                rest = [v for v in internal if v not in R]
                for mask in product((0, 1), repeat=len(rest)):
                    S = [*s_end, *(v for v, m in zip(rest, mask) if m == 0)]
                    T = [*t_end, *(v for v, m in zip(rest, mask) if m == 1)]
                    if not S or not T:
                        continue
                    yield gen_gen_max_cut(d, R, S, T, p)


def iter_card_paths(d: Digraph, p: int, both_orientations: bool = False) -> Iterator[Inequality]:
    """Card-path inequalities; ``P`` and its reversal coincide, so one is kept by default."""
    for path in permutations(list(d.internal), p):
        if not both_orientations and path[0] > path[-1]:
            continue
        yield gen_card_path(d, path)


def iter_nonneg(d: Digraph) -> Iterator[Inequality]:
    for a in d.arcs:
        yield gen_nonneg(d, a)


def iter_degree(d: Digraph) -> Iterator[Inequality]:
    for j in d.internal:
        yield gen_degree(d, j)


def iter_brooms(d: Digraph) -> Iterator[Inequality]:
    for i in d.internal:
        yield gen_broom(d, i, 0, d.n)
        for j in d.internal:
            if j != i:
                yield gen_broom(d, i, j, j)


def max_cut_rewrite(d: Digraph, S: Iterable[int], T: Iterable[int], p: int) -> Inequality:
    """``x((T:S)) <= floor((p+1)/2)``, the counterpart of the 0-in-T, n-in-S cut with empty R."""
    S, T = _nodeset(S), _nodeset(T)
    return Inequality({a: 1 for a in d.cut(T, S)}, LE, (p + 1) // 2, "custom",
                      {"rewrite_of": "gen_max_cut", "S": S, "T": T})
