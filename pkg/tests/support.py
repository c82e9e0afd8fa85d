"""Shared helpers for the test suite."""
import random
from fractions import Fraction

from pathpoly.core import Digraph
from pathpoly.enumeration import path_sequences, seq_arcs
from pathpoly.separation import FractionalPoint

ACCEPTANCE_LINES: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def random_point(rng: random.Random, d: Digraph, p: int, paths: int = 3, cycle_weight=Fraction(1, 3)):
    """Convex combination of random p-paths plus a weighted 2-cycle on internal nodes."""
    seqs = path_sequences(d, p)
    ws = [rng.randint(1, 5) for _ in range(rng.randint(1, paths))]
    x = FractionalPoint(d, {})
    for w in ws:
        x = x + FractionalPoint.from_arcs(d, seq_arcs(rng.choice(seqs)), Fraction(w, sum(ws)))
    if cycle_weight:
        i, j = rng.sample(list(d.internal), 2)
        x = x + FractionalPoint.from_arcs(d, [(i, j), (j, i)], cycle_weight)
    return x

