"""Find inequalities violated by a fractional point.

One-sided min-cuts are separated exactly by max-flow; min-cuts and
card-path rows by enumeration while it fits a budget, greedily beyond it;
the partition families (generalized max-cut, jump) by multi-start local
search, or exhaustively when the partition count is small.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, perm
from typing import Iterable, Mapping, Optional

from .core import Arc, Digraph, Inequality, as_fraction
from .families import (gen_broom, gen_card_path, gen_degree, gen_gen_max_cut, gen_jump, gen_min_cut,
                       gen_nonneg, gen_one_sided_min_cut, gen_upper_bound, max_cut_rhs)
from .formats import format_fraction
from .linalg import equality_system

DEFAULT_BUDGET = 10 ** 5


@dataclass(frozen=True)
class FractionalPoint:
    digraph: Digraph
    values: Mapping[Arc, Fraction]

    def __post_init__(self):
        clean = {}
        for a, v in self.values.items():
            a = tuple(a)
            if a not in self.digraph:
                raise ValueError(f"arc {a} not in the digraph")
            v = as_fraction(v)
            if v:
                clean[a] = v
        object.__setattr__(self, "values", clean)

    @classmethod
    def from_arcs(cls, d: Digraph, arcs: Iterable[Arc], weight=1) -> "FractionalPoint":
        return cls(d, {a: weight for a in arcs})

    def __getitem__(self, arc: Arc) -> Fraction:
        return self.values.get(arc, Fraction(0))

    def __add__(self, other: "FractionalPoint") -> "FractionalPoint":
        out = dict(self.values)
        for a, v in other.values.items():
            out[a] = out.get(a, 0) + v
        return FractionalPoint(self.digraph, out)

    def scaled(self, factor) -> "FractionalPoint":
        f = as_fraction(factor)
        return FractionalPoint(self.digraph, {a: f * v for a, v in self.values.items()})

    def total(self, arcs: Iterable[Arc]) -> Fraction:
        return sum((self[a] for a in arcs), Fraction(0))

    def violated_equations(self, p: int) -> list[Inequality]:
        return [q for q in equality_system(self.digraph, p) if not q.satisfied(self.values)]

    def require_model_rows(self, p: int) -> None:
        bad = self.violated_equations(p)
        if bad:
            raise ValueError(f"point violates {len(bad)} flow/cardinality rows, e.g. {bad[0].params}")


@dataclass
class SeparationResult:
    found: list = field(default_factory=list)
    exhaustive: dict = field(default_factory=dict)

    def add(self, ineq: Inequality, x: FractionalPoint) -> None:
        v = ineq.violation(x.values)
        if v > 0:
            self.found.append((ineq, v))

    def finish(self) -> "SeparationResult":
        best: dict = {}
        for q, v in self.found:
            if q not in best:
                best[q] = (q, v)
        self.found = sorted(best.values(), key=lambda t: (-t[1], t[0].family, tuple(t[0].coeffs.items())))
        return self

    def merge(self, other: "SeparationResult") -> "SeparationResult":
        self.found.extend(other.found)
        self.exhaustive.update(other.exhaustive)
        return self.finish()

    @property
    def best(self) -> Optional[tuple]:
        return self.found[0] if self.found else None

    def __len__(self) -> int:
        return len(self.found)

    def lines(self) -> list[str]:
        out = [f"exhaustive {k}: {str(v).lower()}" for k, v in sorted(self.exhaustive.items())]
        for q, v in self.found:
            out.append(f"{q.family} {dict(q.params)} violation {format_fraction(v)}: {q}")
        return out


# ---------------------------------------------------------------------------
# bounds, degree rows, brooms


def separate_trivial(x: FractionalPoint, p: Optional[int] = None) -> SeparationResult:
    """Bounds, degree rows and brooms; the 0-n broom is skipped for p = 2, where it is invalid."""
    d = x.digraph
    res = SeparationResult()
    for a in d.arcs:
        res.add(gen_nonneg(d, a), x)
        res.add(gen_upper_bound(d, a), x)
    for j in d.internal:
        res.add(gen_degree(d, j), x)
    for i in d.internal:
        if p != 2:
            res.add(gen_broom(d, i, 0, d.n), x)
        for j in d.internal:
            if j != i:
                res.add(gen_broom(d, i, j, j), x)
    res.exhaustive["trivial"] = True
    return res.finish()


# ---------------------------------------------------------------------------
# one-sided min-cut: max-flow from the merged ends to l


def max_flow(nodes: Iterable[int], cap: Mapping[Arc, Fraction], source: int, sink: int) -> tuple[Fraction, set]:
    """Edmonds-Karp on exact capacities.

    Returns the flow value and the largest source side of a minimum cut
    (every node that cannot reach the sink in the residual network).
    """
    nodes = list(nodes)
    residual: dict = {}
    adj: dict = {v: set() for v in nodes}
    for (i, j), c in cap.items():
        if c <= 0 or i == j:
            continue
        residual[(i, j)] = residual.get((i, j), 0) + c
        residual.setdefault((j, i), Fraction(0))
        adj[i].add(j)
        adj[j].add(i)
    order = {v: sorted(adj[v]) for v in nodes}
    value = Fraction(0)
    while True:
        prev = {source: None}
        queue = deque([source])
        while queue and sink not in prev:
            u = queue.popleft()
            for w in order[u]:
                if w not in prev and residual[(u, w)] > 0:
                    prev[w] = u
                    queue.append(w)
        if sink not in prev:
            reach = {sink}
            queue = deque([sink])
            while queue:
                w = queue.popleft()
                for u in order[w]:
                    if u not in reach and residual[(u, w)] > 0:
                        reach.add(u)
                        queue.append(u)
            return value, set(nodes) - reach
        push = None
        w = sink
        while prev[w] is not None:
            r = residual[(prev[w], w)]
            push = r if push is None or r < push else push
            w = prev[w]
        w = sink
        while prev[w] is not None:
            u = prev[w]
            residual[(u, w)] -= push
            residual[(w, u)] += push
            w = u
        value += push


def _merged_capacities(x: FractionalPoint) -> tuple[dict, int]:
    """Capacities with node n folded into node 0 (label 0 is the merged source)."""
    d = x.digraph
    cap: dict = {}
    for (i, j), v in x.values.items():
        i2 = 0 if i == d.n else i
        j2 = 0 if j == d.n else j
        if i2 != j2 and v > 0:
            cap[(i2, j2)] = cap.get((i2, j2), 0) + v
    return cap, 0


def separate_one_sided_min_cut(x: FractionalPoint) -> SeparationResult:
    d = x.digraph
    if any(v < 0 for v in x.values.values()):
        raise ValueError("max-flow separation needs a nonnegative point")
    cap, src = _merged_capacities(x)
    nodes = [v for v in d.nodes if v != d.n]
    res = SeparationResult()
    for l in d.internal:
        out_l = x.total(d.out_arcs(l))
        if out_l == 0:
            continue
        value, side = max_flow(nodes, cap, src, l)
        if value < out_l:
            S = sorted(side | {d.n})
            res.add(gen_one_sided_min_cut(d, S, l), x)
    res.exhaustive["one_sided_min_cut"] = True
    return res.finish()


def one_sided_min_cut_bruteforce(x: FractionalPoint, l: int) -> tuple[Fraction, tuple]:
    """Smallest ``x((S:V-S))`` over all ``S`` with ``0, n`` in ``S`` and ``l`` outside."""
    d = x.digraph
    others = [v for v in d.internal if v != l]
    best = None
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            S = (0, *extra, d.n)
            rest = [v for v in d.nodes if v not in S]
            val = x.total(d.cut(S, rest))
            if best is None or val < best[0]:
                best = (val, S)
    return best


# ---------------------------------------------------------------------------
# min-cut with 3 <= |S| <= p


def min_cut_count(n: int, p: int) -> int:
    return sum(comb(n - 1, k) for k in range(1, min(p - 2, n - 2) + 1))


def separate_min_cut(x: FractionalPoint, p: int, budget: int = DEFAULT_BUDGET) -> SeparationResult:
    d = x.digraph
    inner = list(d.internal)
    res = SeparationResult()

    def cut_value(S) -> Fraction:
        Sset = set(S)
        return sum((v for (i, j), v in x.values.items() if i in Sset and j not in Sset), Fraction(0))

    if min_cut_count(d.n, p) <= budget:
        for k in range(1, min(p - 2, d.n - 2) + 1):
            for extra in combinations(inner, k):
                S = (0, *extra, d.n)
                if cut_value(S) < 1:
                    res.add(gen_min_cut(d, S), x)
        res.exhaustive["min_cut"] = True
        return res.finish()
    S = [0, d.n]
    while len(S) < min(p, d.n):
        cand = [v for v in inner if v not in S]
        v = min(cand, key=lambda c: (cut_value(S + [c]), c))
        S.append(v)
        if cut_value(S) < 1:
            res.add(gen_min_cut(d, S), x)
    res.exhaustive["min_cut"] = False
    return res.finish()


# ---------------------------------------------------------------------------
# partition families


_ENDS = {"0n_in_S": ("S", "S"), "0n_in_T": ("T", "T"), "0_in_S_n_in_T": ("S", "T"), "0_in_T_n_in_S": ("T", "S")}


def _max_cut_violation(x: FractionalPoint, p: int, block: dict, variant: str) -> Fraction:
    d = x.digraph
    lhs = Fraction(0)
    for (i, j), v in x.values.items():
        bi = block[i]
        if bi == "R" or (bi == "S" and block[j] == "T"):
            lhs += v
    r = sum(1 for b in block.values() if b == "R")
    return lhs - max_cut_rhs(variant, p, r)


def _max_cut_from(d: Digraph, p: int, block: dict, variant: str) -> Optional[Inequality]:
    R = [v for v in d.nodes if block[v] == "R"]
    S = [v for v in d.nodes if block[v] == "S"]
    T = [v for v in d.nodes if block[v] == "T"]
    if not S or not T:
        return None
    return gen_gen_max_cut(d, R, S, T, p)


def _assignment(d: Digraph, variant: str, labels: Iterable[str]) -> dict:
    e0, en = _ENDS[variant]
    block = {0: e0, d.n: en}
    block.update(zip(d.internal, labels))
    return block


def partition_count(n: int) -> int:
    return 4 * 3 ** (n - 1)


def _variant_of(block: dict, n: int) -> str:
    return {("S", "S"): "0n_in_S", ("T", "T"): "0n_in_T",
            ("S", "T"): "0_in_S_n_in_T", ("T", "S"): "0_in_T_n_in_S"}[(block[0], block[n])]


def _partition_score(x: FractionalPoint, p: int, block: dict):
    # partitions with an empty S or T do not give a row
    if "S" not in block.values() or "T" not in block.values():
        return None
    return _max_cut_violation(x, p, block, _variant_of(block, x.digraph.n))


def _local_search_max_cut(x: FractionalPoint, p: int, rng: Optional[random.Random], variant: str) -> dict:
    """Steepest ascent from a random start (all of R when ``rng`` is None); the ends may switch sides."""
    d = x.digraph
    block = _assignment(d, variant, (rng.choice("RST") for _ in d.internal) if rng else "R" * len(d.internal))
    cur = _partition_score(x, p, block)
    improved = True
    while improved:
        improved = False
        best_move = None
        for v in d.nodes:
            old = block[v]
            for b in ("ST" if v in (0, d.n) else "RST"):
                if b == old:
                    continue
                block[v] = b
                val = _partition_score(x, p, block)
                if val is not None and (cur is None or val > cur) and (best_move is None or val > best_move[0]):
                    best_move = (val, v, b)
            block[v] = old
        if best_move is not None:
            cur, v, b = best_move
            block[v] = b
            improved = True
    return block


def _layers(x: FractionalPoint, p: int) -> list[list[int]]:
    """Internal nodes in ``p`` nonempty layers ordered by distance from 0 under ``1 - x``."""
    d = x.digraph
    dist = {0: Fraction(0)}
    todo = set(d.nodes)
    while todo:
        u = min((v for v in todo if v in dist), key=lambda v: (dist[v], v), default=None)
        if u is None:
            break
        todo.discard(u)
        for a in d.out_arcs(u):
            w = a[1]
            nd = dist[u] + 1 - x[a]
            if w in todo and (w not in dist or nd < dist[w]):
                dist[w] = nd
    inner = sorted(d.internal, key=lambda v: (dist.get(v, Fraction(10 ** 9)), v))
    k = len(inner)
    return [inner[i * k // p:(i + 1) * k // p] for i in range(p)]


def _jump_violation(x: FractionalPoint, where: dict, p: int) -> Fraction:
    lhs = Fraction(0)
    for (i, j), v in x.values.items():
        bi, bj = where[i], where[j]
        c = 0
        if bj >= bi + 2:
            c += 1
        if bi in (p - 1, p) and bj in (1, 2):
            c -= 1
        lhs += c * v
    return 1 - lhs


def _jump_search(x: FractionalPoint, p: int, start: list[list[int]]) -> tuple[Fraction, list]:
    d = x.digraph
    where = {0: 0, d.n: p + 1}
    for b, layer in enumerate(start, start=1):
        for v in layer:
            where[v] = b
    size = {b: len(layer) for b, layer in enumerate(start, start=1)}
    cur = _jump_violation(x, where, p)
    while True:
        best = None
        for v in d.internal:
            old = where[v]
            if size[old] == 1:
                continue
            for b in range(1, p + 1):
                if b == old:
                    continue
                where[v] = b
                val = _jump_violation(x, where, p)
                if val > cur and (best is None or val > best[0]):
                    best = (val, v, b)
            where[v] = old
        if best is None:
            break
        cur, v, b = best
        size[where[v]] -= 1
        size[b] += 1
        where[v] = b
    blocks = [[0]] + [[v for v in d.internal if where[v] == b] for b in range(1, p + 1)] + [[d.n]]
    return cur, blocks


def separate_partition_families(x: FractionalPoint, p: int, seed: int = 0, starts: int = 20,
                                budget: int = DEFAULT_BUDGET, exhaustive: Optional[bool] = None) -> SeparationResult:
    """Generalized max-cut (all four end placements) and jump rows."""
    d = x.digraph
    res = SeparationResult()
    full = partition_count(d.n) <= budget if exhaustive is None else exhaustive
    if full:
        for variant in _ENDS:
            for labels in product("RST", repeat=d.n - 1):
                block = _assignment(d, variant, labels)
                if _max_cut_violation(x, p, block, variant) > 0:
                    q = _max_cut_from(d, p, block, variant)
                    if q is not None:
                        res.add(q, x)
    else:
        root = random.Random(seed)
        seeds = [root.randrange(2 ** 32) for _ in range(starts)]
        # one all-R start per end placement, then random starts
        plan = [(None, v) for v in _ENDS] + [(random.Random(s), list(_ENDS)[k % 4]) for k, s in enumerate(seeds)]
        for rng, variant in plan:
            block = _local_search_max_cut(x, p, rng, variant)
            val = _partition_score(x, p, block)
            if val is not None and val > 0:
                q = _max_cut_from(d, p, block, variant)
                if q is not None:
                    res.add(q, x)
    res.exhaustive["gen_max_cut"] = full
    if len(d.internal) >= p >= 2:
        rng = random.Random(seed + 1)
        start = _layers(x, p)
        for k in range(max(1, starts // 4)):
            if k:
                nodes = list(d.internal)
                rng.shuffle(nodes)
                start = [nodes[i * len(nodes) // p:(i + 1) * len(nodes) // p] for i in range(p)]
            val, blocks = _jump_search(x, p, start)
            if val > 0:
                res.add(gen_jump(d, blocks), x)
    res.exhaustive["jump"] = False
    return res.finish()


# ---------------------------------------------------------------------------
# card-path rows


def card_path_count(n: int, p: int) -> int:
    return perm(n - 1, p) if p <= n - 1 else 0


def _card_path_violation(x: FractionalPoint, path) -> Fraction:
    d = x.digraph
    indeg = sum((x.total(d.in_arcs(i)) for i in path[1:-1]), Fraction(0))
    bid = sum((x[(i, j)] + x[(j, i)] for i, j in zip(path, path[1:])), Fraction(0))
    return bid - indeg


def separate_card_path(x: FractionalPoint, p: int, budget: int = DEFAULT_BUDGET,
                       exhaustive: Optional[bool] = None) -> SeparationResult:
    d = x.digraph
    res = SeparationResult()
    if p < 3 or p > d.n - 1:
        res.exhaustive["card_path"] = True
        return res
    full = card_path_count(d.n, p) <= budget if exhaustive is None else exhaustive
    if full:
        for path in permutations(list(d.internal), p):
            if path[0] < path[-1] and _card_path_violation(x, path) > 0:
                res.add(gen_card_path(d, path), x)
    else:
        w = {(i, j): x[(i, j)] + x[(j, i)] for i in d.internal for j in d.internal if i != j}
        for start in d.internal:
            path = [start]
            while len(path) < p:
                last = path[-1]
                cand = [v for v in d.internal if v not in path]
                pen = x.total(d.in_arcs(last)) if len(path) > 1 else 0
                v = max(cand, key=lambda c: (w[(last, c)] - pen, -c))
                path.append(v)
            if _card_path_violation(x, path) > 0:
                q = tuple(path) if path[0] < path[-1] else tuple(reversed(path))
                res.add(gen_card_path(d, q), x)
    res.exhaustive["card_path"] = full
    return res.finish()


def separate_all(x: FractionalPoint, p: int, seed: int = 0, budget: int = DEFAULT_BUDGET) -> SeparationResult:
    res = separate_trivial(x, p)
    if all(v >= 0 for v in x.values.values()):
        res.merge(separate_one_sided_min_cut(x))
    res.merge(separate_min_cut(x, p, budget))
    res.merge(separate_partition_families(x, p, seed=seed, budget=budget))
    res.merge(separate_card_path(x, p, budget))
    return res
