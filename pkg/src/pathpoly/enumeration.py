"""Exhaustive enumeration of paths, cycles and bowties, plus brute-force optima.

All enumerations run a depth-first search that visits successors in
increasing node order, so output order is deterministic.  Node sequences are
cached per ``(digraph, length)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .core import Arc, Digraph, IncidenceVector, as_fraction

NodeSeq = tuple[int, ...]


def _succ_table(d: Digraph) -> dict[int, list[int]]:
    table: dict[int, list[int]] = {v: [] for v in d.nodes}
    for t, h in d.arcs:
        table[t].append(h)
    return table


def iter_paths(d: Digraph, q: int, start: int = 0, end: Optional[int] = None,
               allowed: Optional[Iterable[int]] = None) -> Iterator[NodeSeq]:
    """Simple directed paths with exactly ``q`` arcs from ``start`` to ``end``.

    ``allowed`` restricts the interior nodes.
    """
    end = d.n if end is None else end
    succ = _succ_table(d)
    ok = None if allowed is None else set(allowed)
    seq = [start]
    used = {start}

    def rec():
        v = seq[-1]
        left = q - (len(seq) - 1)
        if left == 0:
            if v == end:
                yield tuple(seq)
            return
        for w in succ[v]:
            if w in used:
                continue
            if left == 1:
                if w != end:
                    continue
            else:
                if w == end or (ok is not None and w not in ok):
                    continue
            used.add(w)
            seq.append(w)
            yield from rec()
            seq.pop()
            used.discard(w)

    if q < 1 or start == end:
        return iter(())
    return rec()


@lru_cache(maxsize=256)
def path_sequences(d: Digraph, p: int) -> tuple[NodeSeq, ...]:
    return tuple(iter_paths(d, p))


def seq_arcs(seq: Sequence[int]) -> list[Arc]:
    return list(zip(seq, seq[1:]))


def cycle_arcs(seq: Sequence[int]) -> list[Arc]:
    """Arcs of the closed walk ``seq[0] -> ... -> seq[-1] -> seq[0]``."""
    return list(zip(seq, list(seq[1:]) + [seq[0]]))


@dataclass(frozen=True)
class PathSet:
    d: Digraph
    p: int
    items: tuple[IncidenceVector, ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def enumerate_paths(d: Digraph, p: int) -> PathSet:
    if not 1 <= p <= d.n:
        raise ValueError(f"p must lie in [1, {d.n}], got {p}")
    items = tuple(IncidenceVector.from_nodes(d, s, "path") for s in path_sequences(d, p))
    return PathSet(d, p, items)


def path_count(n: int, p: int) -> int:
    """Closed-form number of (0,n)-p-paths in the restricted digraph."""
    if p < 2 or p > n:
        return 0
    out = 1
    for k in range(n - p + 1, n):
        out *= k
    return out


@lru_cache(maxsize=64)
def cycle_sequences(dn: Digraph, p: int) -> tuple[NodeSeq, ...]:
    """Simple p-cycles, each listed once starting from its smallest node."""
    succ = _succ_table(dn)
    out = []
    for s in dn.nodes:
        seq = [s]

        def rec():
            v = seq[-1]
            if len(seq) == p:
                if s in succ[v]:
                    out.append(tuple(seq))
                return
            for w in succ[v]:
                if w > s and w not in seq:
                    seq.append(w)
                    rec()
                    seq.pop()

        rec()
    return tuple(out)


def enumerate_cycles(dn: Digraph, p: int) -> list[IncidenceVector]:
    if p < 2:
        raise ValueError("cycles have at least two arcs")
    return [IncidenceVector.from_arcs(dn, cycle_arcs(c), "cycle", c) for c in cycle_sequences(dn, p)]


@dataclass(frozen=True)
class Bowtie:
    path: NodeSeq
    cycle: NodeSeq  # starts at the tie node

    @property
    def arcs(self) -> list[Arc]:
        return seq_arcs(self.path) + cycle_arcs(self.cycle)


@dataclass(frozen=True)
class BowtieSet:
    k: int
    p: int
    items: tuple[IncidenceVector, ...]
    bowties: tuple[Bowtie, ...]

    def __len__(self) -> int:
        return len(self.items)


def bowtie_sequences(d: Digraph, p: int, k: int) -> list[Bowtie]:
    if k in (0, d.n) or k not in d.nodes:
        raise ValueError(f"tie node must be internal, got {k}")
    succ = _succ_table(d)
    out = []
    for plen in range(2, p - 1):
        clen = p - plen
        for path in iter_paths(d, plen):
            if k not in path:
                continue
            blocked = set(path) - {k}
            seq = [k]

            def rec():
                v = seq[-1]
                if len(seq) == clen:
                    if k in succ[v]:
                        out.append(Bowtie(path, tuple(seq)))
                    return
                for w in succ[v]:
                    if w != k and w not in blocked and w not in seq:
                        seq.append(w)
                        rec()
                        seq.pop()

            rec()
    return out


def enumerate_bowties(d: Digraph, p: int, k: int) -> BowtieSet:
    """All p-bowties tied at ``k``; 2-cycles are admitted."""
    if p < 3:
        raise ValueError("a bowtie has at least three arcs")
    bows = bowtie_sequences(d, p, k)
    items = tuple(IncidenceVector.from_arcs(d, b.arcs, "bowtie") for b in bows)
    return BowtieSet(k, p, items, tuple(bows))


# ---------------------------------------------------------------------------
# optima over enumerated classes

OPTIMAL, INFEASIBLE, EMPTY = "optimal", "infeasible", "empty-class"


@dataclass(frozen=True)
class PathOptimum:
    status: str
    value: Optional[Fraction] = None
    path: Optional[NodeSeq] = None


def min_cost_path(d: Digraph, costs: Mapping[Arc, Fraction], p: int) -> PathOptimum:
    """Minimum over all (0,n)-p-paths; ties go to the first in enumeration order."""
    best = None
    arg = None
    cost = {a: as_fraction(c) for a, c in costs.items()}
    for s in path_sequences(d, p):
        v = sum((cost.get(a, 0) for a in seq_arcs(s)), Fraction(0))
        if best is None or v < best:
            best, arg = v, s
    if best is None:
        return PathOptimum(INFEASIBLE)
    return PathOptimum(OPTIMAL, best, arg)


def max_over_paths(d: Digraph, coeffs: Mapping[Arc, Fraction], length: int, through: Optional[int] = None,
                   allowed: Optional[Iterable[int]] = None,
                   where: Optional[Callable[[NodeSeq], bool]] = None) -> PathOptimum:
    """Maximum of a linear form over a constrained class of (0,n)-paths.

    The class holds paths with ``length`` arcs, optionally visiting
    ``through``, with interior in ``allowed`` and passing the predicate
    ``where``.  An empty class yields status ``empty-class``.
    """
    best = None
    arg = None
    for s in iter_paths(d, length, allowed=allowed):
        if through is not None and through not in s:
            continue
        if where is not None and not where(s):
            continue
        v = sum((coeffs.get(a, 0) for a in seq_arcs(s)), Fraction(0))
        if best is None or v > best:
            best, arg = v, s
    if best is None:
        return PathOptimum(EMPTY)
    return PathOptimum(OPTIMAL, as_fraction(best), arg)


def max_over_cycles(dn: Digraph, coeffs: Mapping[Arc, Fraction], p: int) -> PathOptimum:
    best = None
    arg = None
    for c in cycle_sequences(dn, p):
        v = sum((coeffs.get(a, 0) for a in cycle_arcs(c)), Fraction(0))
        if best is None or v > best:
            best, arg = v, c
    if best is None:
        return PathOptimum(EMPTY)
    return PathOptimum(OPTIMAL, as_fraction(best), arg)
