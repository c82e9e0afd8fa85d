"""Node set, arc set, incidence vectors and the inequality record.

Everything here is immutable after construction.  Nodes are the integers
``0..n``; node ``0`` is the source and node ``n`` the terminus.  Arcs are
ordered lexicographically by ``(tail, head)`` and every vector in the package
is indexed against that ordering.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

Arc = tuple[int, int]

RESTRICTED = "restricted"
COMPLETE = "complete"
MODES = (RESTRICTED, COMPLETE)

LE, GE, EQ = "<=", ">=", "=="
SENSES = (LE, GE, EQ)


def as_fraction(value) -> Fraction:
    """Exact conversion; floats are refused because they carry rounding."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating-point values are not accepted; pass int, str or Fraction")
    return Fraction(value)


def _arcs_for(n: int, mode: str) -> tuple[Arc, ...]:
    out = []
    for i in range(n + 1):
        for j in range(n + 1):
            if i == j:
                continue
            if mode == RESTRICTED and (j == 0 or i == n):
                # covers (i,0), (n,i), (n,0)
                continue
            if mode == RESTRICTED and (i, j) == (0, n):
                continue
            out.append((i, j))
    return tuple(out)


@dataclass(frozen=True)
class Digraph:
    """Arc-restricted (or complete) digraph on ``{0,...,n}``.

    Equality and hashing use ``(n, mode)`` only, so two digraphs built from
    the same parameters are interchangeable as cache keys.
    """

    n: int
    mode: str = RESTRICTED
    costs: Optional[Mapping[Arc, Fraction]] = field(default=None, compare=False, repr=False)
    arcs: tuple[Arc, ...] = field(init=False, compare=False, repr=False)
    _index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        arcs = _arcs_for(self.n, self.mode)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "_index", {a: k for k, a in enumerate(arcs)})
        if self.costs is not None:
            costs = {tuple(a): as_fraction(c) for a, c in self.costs.items()}
            for a in costs:
                if a not in self._index:
                    raise ValueError(f"cost given for arc {a} not in the digraph")
            object.__setattr__(self, "costs", costs)

    @property
    def nodes(self) -> range:
        return range(self.n + 1)

    @property
    def internal(self) -> range:
        return range(1, self.n)

    def __len__(self) -> int:
        return len(self.arcs)

    def __contains__(self, arc) -> bool:
        return tuple(arc) in self._index

    def index(self, arc: Arc) -> int:
        return self._index[arc]

    def out_arcs(self, i: int) -> list[Arc]:
        return [a for a in self.arcs if a[0] == i]

    def in_arcs(self, j: int) -> list[Arc]:
        return [a for a in self.arcs if a[1] == j]

    def cut(self, src: Iterable[int], dst: Iterable[int]) -> list[Arc]:
        """Arcs ``(S:T)`` from ``src`` into ``dst``."""
        src, dst = set(src), set(dst)
        return [a for a in self.arcs if a[0] in src and a[1] in dst]

    def inside(self, nodes: Iterable[int]) -> list[Arc]:
        """``A(S)``: arcs with both end nodes in ``nodes``."""
        s = set(nodes)
        return [a for a in self.arcs if a[0] in s and a[1] in s]

    def successors(self, i: int) -> list[int]:
        return [a[1] for a in self.arcs if a[0] == i]


def build_digraph(n: int, mode: str = RESTRICTED, costs=None) -> Digraph:
    return Digraph(n, mode, costs)


def cycle_digraph(num_nodes: int) -> Digraph:
    """Complete digraph on ``num_nodes`` nodes, labelled ``0..num_nodes-1``.

    Used as the p-cycle digraph obtained by contracting source and terminus;
    the merged node carries label ``0``.
    """
    return Digraph(num_nodes - 1, COMPLETE)


def arc_index(d: Digraph, tail: int, head: int) -> Optional[int]:
    return d._index.get((tail, head))


# ---------------------------------------------------------------------------
# incidence vectors


def _walk(arcs: Sequence[Arc], start: int) -> Optional[list[int]]:
    succ = {}
    for t, h in arcs:
        if t in succ:
            return None
        succ[t] = h
    seq = [start]
    seen = {start}
    v = start
    while v in succ:
        v = succ[v]
        if v in seen:
            seq.append(v)
            return seq
        seen.add(v)
        seq.append(v)
    return seq


def is_path_arcs(arcs: Sequence[Arc], s: int, t: int) -> bool:
    """Simple directed ``(s,t)``-path using exactly the given arcs."""
    if not arcs:
        return False
    seq = _walk(arcs, s)
    if seq is None or seq[-1] != t or len(seq) != len(arcs) + 1:
        return False
    return len(set(seq)) == len(seq)


def is_cycle_arcs(arcs: Sequence[Arc]) -> bool:
    if len(arcs) < 2:
        return False
    start = min(a[0] for a in arcs)
    seq = _walk(arcs, start)
    if seq is None or len(seq) != len(arcs) + 1 or seq[-1] != start:
        return False
    return len(set(seq[:-1])) == len(arcs)


def split_bowtie(arcs: Sequence[Arc], s: int, t: int) -> Optional[tuple[list[Arc], list[Arc], int]]:
    """Decompose an arc set into an ``(s,t)``-path and a simple cycle sharing one node.

    Returns ``(path_arcs, cycle_arcs, tie_node)`` or ``None``.
    """
    outs: dict[int, list[int]] = {}
    for a in arcs:
        outs.setdefault(a[0], []).append(a[1])
    branch = [v for v, hs in outs.items() if len(hs) == 2]
    if len(branch) != 1 or any(len(hs) > 2 for hs in outs.values()):
        return None
    k = branch[0]
    for first in outs[k]:
        # follow the cycle branch from k via `first`
        cyc = [(k, first)]
        v = first
        ok = True
        while v != k:
            hs = outs.get(v)
            if not hs or len(hs) != 1:
                ok = False
                break
            cyc.append((v, hs[0]))
            v = hs[0]
            if len(cyc) > len(arcs):
                ok = False
                break
        if not ok:
            continue
        rest = [a for a in arcs if a not in set(cyc)]
        if is_path_arcs(rest, s, t) and is_cycle_arcs(cyc):
            path_nodes = {x for a in rest for x in a}
            cyc_nodes = {x for a in cyc for x in a}
            if path_nodes & cyc_nodes == {k}:
                return rest, cyc, k
    return None


KINDS = ("path", "cycle", "bowtie", "other")


@dataclass(frozen=True)
class IncidenceVector:
    """0/1 vector of an arc subset, stored by its support (sorted arc indices)."""

    digraph: Digraph
    support: tuple[int, ...]
    kind: str = "other"
    nodes: Optional[tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        sup = tuple(sorted(self.support))
        if len(set(sup)) != len(sup) or (sup and (sup[0] < 0 or sup[-1] >= len(self.digraph))):
            raise ValueError("support must be distinct arc indices of the digraph")
        object.__setattr__(self, "support", sup)
        arcs = self.arcs
        d = self.digraph
        if self.kind == "path" and not is_path_arcs(arcs, 0, d.n):
            raise ValueError(f"arc set {arcs} is not a simple (0,{d.n})-path")
        if self.kind == "cycle" and not is_cycle_arcs(arcs):
            raise ValueError(f"arc set {arcs} is not a simple cycle")
        if self.kind == "bowtie" and split_bowtie(arcs, 0, d.n) is None:
            raise ValueError(f"arc set {arcs} is not a bowtie")

    @classmethod
    def from_arcs(cls, d: Digraph, arcs: Iterable[Arc], kind: str = "other", nodes=None):
        return cls(d, tuple(d.index(tuple(a)) for a in arcs), kind, nodes)

    @classmethod
    def from_nodes(cls, d: Digraph, seq: Sequence[int], kind: str = "path"):
        seq = tuple(seq)
        return cls.from_arcs(d, zip(seq, seq[1:]), kind, seq)

    @property
    def arcs(self) -> list[Arc]:
        return [self.digraph.arcs[k] for k in self.support]

    @property
    def bits(self) -> tuple[int, ...]:
        b = [0] * len(self.digraph)
        for k in self.support:
            b[k] = 1
        return tuple(b)

    def __len__(self) -> int:
        return len(self.support)

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))


# ---------------------------------------------------------------------------
# inequalities


def _freeze(value):
    if isinstance(value, (list, tuple)):
        return tuple(_freeze(v) for v in value)
    if isinstance(value, (set, frozenset)):
        return tuple(sorted(_freeze(v) for v in value))
    if isinstance(value, dict):
        return {k: _freeze(v) for k, v in value.items()}
    return value


@dataclass(frozen=True)
class Inequality:
    """``sum coeffs[a] * x_a  (sense)  rhs`` with a provenance tag.

    ``coeffs`` keys are arcs (or undirected edges ``(i, j)`` with ``i < j``);
    zero coefficients are dropped.  ``params`` holds JSON-like values with
    tuples in place of lists.
    """

    coeffs: Mapping[Arc, Fraction]
    sense: str
    rhs: Fraction
    family: str = "custom"
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.sense not in SENSES:
            raise ValueError(f"sense must be one of {SENSES}, got {self.sense!r}")
        clean = {}
        for a, c in self.coeffs.items():
            c = as_fraction(c)
            if c:
                clean[tuple(a)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))
        object.__setattr__(self, "params", _freeze(dict(self.params)))

    def __hash__(self):
        return hash((tuple(self.coeffs.items()), self.sense, self.rhs))

    def coeff(self, arc: Arc) -> Fraction:
        return self.coeffs.get(arc, Fraction(0))

    def lhs(self, x: Mapping[Arc, Fraction]) -> Fraction:
        return sum((c * x.get(a, 0) for a, c in self.coeffs.items()), Fraction(0))

    def lhs_on(self, arcs: Iterable[Arc]) -> Fraction:
        """Left-hand side at the incidence vector of ``arcs``."""
        return sum((self.coeffs.get(tuple(a), 0) for a in arcs), Fraction(0))

    def satisfied(self, x: Mapping[Arc, Fraction]) -> bool:
        v = self.lhs(x)
        if self.sense == LE:
            return v <= self.rhs
        if self.sense == GE:
            return v >= self.rhs
        return v == self.rhs

    def violation(self, x: Mapping[Arc, Fraction]) -> Fraction:
        """Amount by which ``x`` violates the row (<= 0 when satisfied)."""
        v = self.lhs(x)
        if self.sense == LE:
            return v - self.rhs
        if self.sense == GE:
            return self.rhs - v
        return abs(v - self.rhs)

    def as_leq(self) -> "Inequality":
        if self.sense == GE:
            return Inequality({a: -c for a, c in self.coeffs.items()}, LE, -self.rhs,
                              self.family, self.params)
        if self.sense == EQ:
            raise ValueError("an equation has no single <= form")
        return self

    def scaled(self, factor) -> "Inequality":
        f = as_fraction(factor)
        if f <= 0:
            raise ValueError("only positive scaling preserves the sense")
        return Inequality({a: f * c for a, c in self.coeffs.items()}, self.sense, f * self.rhs,
                          self.family, self.params)

    def with_provenance(self, family: str, params: Mapping) -> "Inequality":
        return Inequality(self.coeffs, self.sense, self.rhs, family, params)

    def support_ok(self, d: Digraph) -> bool:
        return all(a in d for a in self.coeffs)

    def vector(self, d: Digraph) -> list[Fraction]:
        v = [Fraction(0)] * len(d)
        for a, c in self.coeffs.items():
            v[d.index(a)] = c
        return v

    def __str__(self) -> str:
        terms = []
        for (i, j), c in self.coeffs.items():
            if c == 1:
                terms.append(f"+x{i},{j}")
            elif c == -1:
                terms.append(f"-x{i},{j}")
            else:
                terms.append(f"{'+' if c > 0 else '-'}{abs(c)}*x{i},{j}")
        body = " ".join(terms) if terms else "0"
        return f"{body} {self.sense} {self.rhs}"


@dataclass(frozen=True)
class NodePartition:
    """Named, pairwise disjoint node blocks."""

    blocks: Mapping[str, frozenset]

    def __post_init__(self):
        blocks = {k: frozenset(v) for k, v in self.blocks.items()}
        seen: set = set()
        for name, b in blocks.items():
            if seen & b:
                raise ValueError(f"block {name} overlaps an earlier block")
            seen |= b
        object.__setattr__(self, "blocks", blocks)

    def __getitem__(self, name: str) -> frozenset:
        return self.blocks[name]

    def covers(self, nodes: Iterable[int]) -> bool:
        return set().union(*self.blocks.values()) == set(nodes)


@dataclass(frozen=True)
class Instance:
    """A min-cost (0,n)-p-path problem.  Arcs absent from ``costs`` cost 0."""

    digraph: Digraph
    p: int
    costs: Mapping[Arc, Fraction]

    def __post_init__(self):
        costs = {tuple(a): as_fraction(c) for a, c in self.costs.items()}
        for a in costs:
            if a not in self.digraph:
                raise ValueError(f"cost given for arc {a} not in the digraph")
        object.__setattr__(self, "costs", dict(sorted(costs.items())))
        if not 1 <= self.p <= self.digraph.n:
            raise ValueError(f"p must lie in [1, n], got {self.p}")

    def cost(self, arc: Arc) -> Fraction:
        return self.costs.get(arc, Fraction(0))

    def cost_vector(self) -> list[Fraction]:
        return [self.cost(a) for a in self.digraph.arcs]
