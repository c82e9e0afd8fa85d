"""Plain-text and JSON file formats.

Instance text::

    n p mode
    tail head num/den
    ...

Fractional point text: one ``tail head num/den`` line per arc with a nonzero
value.  Inequalities are JSON records with fields ``family``, ``params``,
``coeffs`` (list of ``[tail, head, num, den]``), ``sense``, ``rhs_num`` and
``rhs_den``.  Blank lines and ``#`` comments are ignored in text formats.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

from .core import MODES, SENSES, Arc, Digraph, Inequality, Instance


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _tokens(line: str):
    """Yield ``(token, column)`` with 1-based columns."""
    col = 0
    for part in line.split():
        col = line.index(part, col)
        yield part, col + 1
        col += len(part)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line, col) from None


def _frac(tok: str, line: int, col: int) -> Fraction:
    if any(c in tok for c in ".eE"):
        raise ParseError(f"expected an exact rational num/den, got {tok!r}", line, col)
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"expected a rational num/den, got {tok!r}", line, col) from None


def _arc_lines(lines, d: Digraph) -> dict:
    values: dict[Arc, Fraction] = {}
    for lineno, line in lines:
        toks = list(_tokens(line))
        if len(toks) != 3:
            col = toks[min(len(toks), 3) - 1][1] if toks else 1
            raise ParseError(f"expected 'tail head num/den', got {len(toks)} fields", lineno, col)
        (t, ct), (h, ch), (v, cv) = toks
        arc = (_int(t, lineno, ct), _int(h, lineno, ch))
        if arc not in d:
            raise ParseError(f"arc {arc} is not in the digraph", lineno, ct)
        if arc in values:
            raise ParseError(f"arc {arc} listed twice", lineno, ct)
        values[arc] = _frac(v, lineno, cv)
    return values


def parse_instance(text: str) -> Instance:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty instance", 1, 1)
    lineno, header = lines[0]
    toks = list(_tokens(header))
    if len(toks) != 3:
        raise ParseError("header must be 'n p mode'", lineno, 1)
    (ns, cn), (ps, cp), (mode, cm) = toks
    n, p = _int(ns, lineno, cn), _int(ps, lineno, cp)
    if mode not in MODES:
        raise ParseError(f"mode must be one of {', '.join(MODES)}", lineno, cm)
    if n < 2:
        raise ParseError("n must be at least 2", lineno, cn)
    if not 1 <= p <= n:
        raise ParseError("p must lie in [1, n]", lineno, cp)
    d = Digraph(n, mode)
    return Instance(d, p, _arc_lines(lines[1:], d))


def format_instance(inst: Instance) -> str:
    out = [f"{inst.digraph.n} {inst.p} {inst.digraph.mode}"]
    for (t, h), c in sorted(inst.costs.items()):
        out.append(f"{t} {h} {format_fraction(c)}")
    return "\n".join(out) + "\n"


def parse_point(text: str, d: Digraph) -> dict:
    return _arc_lines(list(_content_lines(text)), d)


def format_point(x: Mapping) -> str:
    return "".join(f"{t} {h} {format_fraction(v)}\n" for (t, h), v in sorted(x.items()) if v)


# ---------------------------------------------------------------------------
# inequality records


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return format_fraction(value)
    return value


def inequality_to_record(ineq: Inequality) -> dict:
    return {
        "family": ineq.family,
        "params": _jsonable(dict(ineq.params)),
        "coeffs": [[t, h, c.numerator, c.denominator] for (t, h), c in ineq.coeffs.items()],
        "sense": ineq.sense,
        "rhs_num": ineq.rhs.numerator,
        "rhs_den": ineq.rhs.denominator,
    }


def inequality_from_record(rec: Mapping) -> Inequality:
    try:
        coeffs = {}
        for entry in rec["coeffs"]:
            t, h, num, den = entry
            coeffs[(int(t), int(h))] = Fraction(int(num), int(den))
        sense = rec["sense"]
        if sense not in SENSES:
            raise ValueError(f"bad sense {sense!r}")
        rhs = Fraction(int(rec["rhs_num"]), int(rec["rhs_den"]))
        return Inequality(coeffs, sense, rhs, rec.get("family", "custom"), rec.get("params", {}))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed inequality record: {exc}") from None


def dumps_inequalities(ineqs: Iterable[Inequality]) -> str:
    return json.dumps([inequality_to_record(i) for i in ineqs], indent=1, sort_keys=True) + "\n"


def dump_inequality(ineq: Inequality) -> str:
    return json.dumps(inequality_to_record(ineq), sort_keys=True)


def loads_inequalities(text: str) -> list[Inequality]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(data, dict):
        data = [data]
    return [inequality_from_record(r) for r in data]
