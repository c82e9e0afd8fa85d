"""Command-line front end.

Every subcommand writes plain text with exact rationals.  Exit status:
0 when everything checked out, 1 when a predicted verdict (or other
closed-form claim) disagrees with the enumeration oracle, 2 on bad input.

Inequalities are named on the command line by a family word followed by
``key=value`` tokens, with comma-separated node lists::

    mincut S=0,1,6
    osmincut S=0,1,6 l=2
    gmaxcut R=2 S=0,1 T=3,4,5,6
    jump S1=1,5 S2=2,6 S3=3,7 S4=4,8
    cardpath P=1,2,3,4
    nonneg a=0,1
    degree j=2
    broom i=1 j=0 k=6
    extra4 repaired=1

For ``jump`` the end blocks ``{0}`` and ``{n}`` are implicit.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable, Optional, Sequence

from . import families as fam
from . import lab
from . import undirected as und
from .core import COMPLETE, MODES, RESTRICTED, Digraph, Inequality, cycle_digraph
from .enumeration import enumerate_bowties, enumerate_cycles, enumerate_paths
from .formats import ParseError, dump_inequality, format_fraction, loads_inequalities, parse_instance, parse_point
from .lifting import LiftError, clone_node_lift, lift_to_cycle, relax_lift, set_lift, to_undirected

OK, VIOLATED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# family grammar


def _nodes(key: str, value: str) -> tuple[int, ...]:
    if value == "":
        return ()
    try:
        return tuple(int(v) for v in value.split(","))
    except ValueError:
        raise InputError(f"{key}= expects comma-separated integers, got {value!r}") from None


def _one(key: str, value: str) -> int:
    vals = _nodes(key, value)
    if len(vals) != 1:
        raise InputError(f"{key}= expects a single integer")
    return vals[0]


def parse_tokens(tokens: Sequence[str]) -> tuple[str, dict]:
    if not tokens:
        raise InputError("missing family name")
    name, kv = tokens[0], {}
    for pos, tok in enumerate(tokens[1:], start=2):
        key, eq, value = tok.partition("=")
        if not eq or not key:
            raise InputError(f"token {pos} ({tok!r}): expected key=value")
        if key in kv:
            raise InputError(f"token {pos} ({tok!r}): {key} given twice")
        kv[key] = value
    return name, kv


def _need(kv: dict, *keys: str, optional: Sequence[str] = ()) -> None:
    missing = [k for k in keys if k not in kv]
    if missing:
        raise InputError(f"missing parameter(s): {', '.join(missing)}")
    extra = sorted(set(kv) - set(keys) - set(optional))
    if extra:
        raise InputError(f"unknown parameter(s): {', '.join(extra)}")


def _jump(d: Digraph, kv: dict) -> Inequality:
    keys = sorted(kv, key=lambda k: (len(k), k))
    want = [f"S{i}" for i in range(1, len(kv) + 1)]
    if keys != want:
        raise InputError("jump blocks must be named S1, S2, ... without gaps")
    return fam.gen_jump(d, [(0,)] + [_nodes(k, kv[k]) for k in want] + [(d.n,)])


def _extra4(d: Digraph, p: int, kv: dict) -> Inequality:
    _need(kv, optional=("repaired",))
    return fam.gen_extra_p4(d, p, repaired=kv.get("repaired", "0") not in ("0", ""))


def _gmaxcut(d: Digraph, p: int, kv: dict) -> Inequality:
    _need(kv, "S", "T", optional=("R",))
    return fam.gen_gen_max_cut(d, _nodes("R", kv.get("R", "")), _nodes("S", kv["S"]), _nodes("T", kv["T"]), p)


def _simple(keys, build):
    def make(d, p, kv):
        _need(kv, *keys)
        return build(d, p, kv)
    return make


DIRECTED: dict[str, Callable] = {
    "nonneg": _simple(("a",), lambda d, p, kv: fam.gen_nonneg(d, _nodes("a", kv["a"]))),
    "degree": _simple(("j",), lambda d, p, kv: fam.gen_degree(d, _one("j", kv["j"]))),
    "mincut": _simple(("S",), lambda d, p, kv: fam.gen_min_cut(d, _nodes("S", kv["S"]))),
    "osmincut": _simple(("S", "l"), lambda d, p, kv: fam.gen_one_sided_min_cut(d, _nodes("S", kv["S"]),
                                                                              _one("l", kv["l"]))),
    "gmaxcut": _gmaxcut,
    "jump": lambda d, p, kv: _jump(d, kv),
    "cardpath": _simple(("P",), lambda d, p, kv: fam.gen_card_path(d, _nodes("P", kv["P"]))),
    "broom": _simple(("i", "j", "k"), lambda d, p, kv: fam.gen_broom(d, _one("i", kv["i"]), _one("j", kv["j"]),
                                                                     _one("k", kv["k"]))),
    "extra4": _extra4,
}

UNDIRECTED: dict[str, Callable] = {
    "unonneg": _simple(("e",), lambda g, p, kv: und.gen_unonneg(g, _nodes("e", kv["e"]))),
    "udegree": _simple(("j",), lambda g, p, kv: und.gen_udegree(g, _one("j", kv["j"]))),
    "umincut": _simple(("S",), lambda g, p, kv: und.gen_umin_cut(g, _nodes("S", kv["S"]))),
    "uosmincut": _simple(("S", "j"), lambda g, p, kv: und.gen_uone_sided_min_cut(g, _nodes("S", kv["S"]),
                                                                               _one("j", kv["j"]))),
    "umaxcut": _simple(("S",), lambda g, p, kv: und.gen_umax_cut(g, _nodes("S", kv["S"]), p)),
    "umaxcut_half": _simple(("S",), lambda g, p, kv: und.gen_umax_cut_half(g, _nodes("S", kv["S"]), p)),
    "parity": _simple(("j", "e"), lambda g, p, kv: und.gen_parity(g, _one("j", kv["j"]), _nodes("e", kv["e"]))),
    "family105": _simple(("delta",), lambda g, p, kv: und.gen_family_105(g, _nodes("delta", kv["delta"]))),
}


def build(table: dict, graph, p: int, tokens: Sequence[str]) -> Inequality:
    name, kv = parse_tokens(tokens)
    if name not in table:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(sorted(table))}")
    try:
        return table[name](graph, p, kv)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{name}: {exc}") from None


def param_text(ineq: Inequality) -> str:
    """``key=value`` rendering of an inequality's parameters, in key order."""
    parts = []
    for k, v in sorted(ineq.params.items()):
        if k in ("p", "variant"):
            continue
        if k == "blocks":
            parts += [f"S{i}={','.join(map(str, b))}" for i, b in enumerate(v[1:-1], start=1)]
        elif isinstance(v, tuple) and all(isinstance(e, int) for e in v):
            parts.append(f"{k}={','.join(map(str, v))}")
        else:
            parts.append(f"{k}={v}")
    return " ".join(parts)


def _natural(ineq: Inequality) -> tuple:
    out = []
    for k, v in sorted(ineq.params.items()):
        if k == "p":
            continue
        if isinstance(v, tuple):
            v = tuple(tuple(e) if isinstance(e, tuple) else (e,) for e in v)
        out.append((k, str(v) if isinstance(v, (str, bool)) else v))
    return tuple(out)


# ---------------------------------------------------------------------------
# subcommands


def _digraph(args) -> Digraph:
    try:
        return Digraph(args.n, args.mode)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _check_p(args) -> None:
    if not 1 <= args.p <= args.n:
        raise InputError(f"p must lie in [1, {args.n}]")


def cmd_enumerate(args, out) -> int:
    _check_p(args)
    if args.undirected:
        g = und.UGraph(args.n)
        out.write("# edges: " + " ".join(f"{i}-{j}" for i, j in g.edges) + "\n")
        for edges in und.enumerate_upaths(g, args.p):
            bits = ["0"] * len(g)
            for e in edges:
                bits[g.index(e)] = "1"
            out.write("".join(bits) + "\n")
        return OK
    if args.cycles:
        dn = cycle_digraph(args.n)
        vecs = enumerate_cycles(dn, args.p)
        arcs = dn.arcs
    else:
        d = _digraph(args)
        vecs = enumerate_bowties(d, args.p, args.bowties).items if args.bowties is not None \
            else enumerate_paths(d, args.p).items
        arcs = d.arcs
    out.write("# arcs: " + " ".join(f"{i}-{j}" for i, j in arcs) + "\n")
    for v in vecs:
        out.write(v.bitstring() + "\n")
    return OK


def cmd_dim(args, out) -> int:
    _check_p(args)
    if args.undirected:
        got, want = und.udimension(und.UGraph(args.n), args.p), und.expected_udimension(args.n, args.p)
    else:
        got = lab.polytope_dimension(_digraph(args), args.p)
        want = lab.expected_dimension(args.n, args.p) if args.mode == COMPLETE or args.p >= 4 else None
    out.write(f"{got}\n")
    if want is not None and want != got:
        out.write(f"closed form: {want}\n")
        return VIOLATED
    return OK


def _verify_one(ineq: Inequality, d: Digraph, p: int, out) -> bool:
    pv, pf = fam.predicted_validity(ineq, d, p), fam.predicted_facet(ineq, d, p)
    rep = lab.check_facet(ineq, d, p)
    out.write(f"family: {ineq.family}\n")
    if ineq.params:
        out.write(f"params: {param_text(ineq)}\n")
    out.write(f"inequality: {ineq}\n")
    out.write(f"predicted_validity: {pv}\n")
    out.write(f"predicted_facet: {pf}\n")
    for line in rep.lines():
        out.write(line + "\n")
    good = lab.agrees(pv, rep.valid) and lab.agrees(pf, rep.is_facet)
    out.write(f"agreement: {'yes' if good else 'NO'}\n")
    return good


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def cmd_verify(args, out) -> int:
    _check_p(args)
    d = _digraph(args)
    if args.file:
        if args.family:
            raise InputError("give either a family or --file, not both")
        try:
            ineqs = loads_inequalities(_read(args.file))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise InputError(str(exc)) from None
        for q in ineqs:
            if not q.support_ok(d):
                raise InputError(f"inequality uses arcs outside the digraph: {q}")
    else:
        ineqs = [build(DIRECTED, d, args.p, args.family)]
    good = True
    for k, q in enumerate(ineqs):
        if k:
            out.write("\n")
        good &= _verify_one(q, d, args.p, out)
    return OK if good else VIOLATED


def _claimed_ufacet(ineq: Inequality, g, p: int) -> Optional[bool]:
    """Expected facet verdict for an undirected row, or ``None`` when no claim applies."""
    if not 4 <= p < g.n:
        return None
    if any(und.uequivalent(ineq, q, g, p) for _, q in und.iter_corollary_facets(g, p)):
        return True
    return None


def cmd_uverify(args, out) -> int:
    _check_p(args)
    name = args.family[0] if args.family else ""
    if name in ("t100", "table2"):
        if len(args.family) > 1:
            raise InputError(f"{name} takes no parameters")
        if name == "t100":
            if args.p != 3:
                raise InputError("t100 is the p = 3 description")
            rep = und.verify_T100(args.n)
        else:
            if args.p not in (1, 2):
                raise InputError("table2 covers p = 1 and p = 2")
            rep = und.verify_table2(args.n, args.p)
        for line in rep.lines():
            out.write(line + "\n")
        return OK if rep.passed else VIOLATED
    g = und.UGraph(args.n)
    ineq = build(UNDIRECTED, g, args.p, args.family)
    rep = und.check_ufacet(ineq, g, args.p)
    # the half-rhs max-cut form is printed as valid but is not, so no claim is made for it
    valid_claim = None if name == "umaxcut_half" else True
    facet_claim = _claimed_ufacet(ineq, g, args.p)
    out.write(f"family: {ineq.family}\n")
    if ineq.params:
        out.write(f"params: {param_text(ineq)}\n")
    out.write(f"inequality: {ineq}\n")
    out.write(f"claimed_validity: {'unknown' if valid_claim is None else str(valid_claim).lower()}\n")
    out.write(f"claimed_facet: {'unknown' if facet_claim is None else str(facet_claim).lower()}\n")
    for line in rep.lines():
        out.write(line + "\n")
    good = (valid_claim is None or valid_claim == rep.valid) and (facet_claim is None or facet_claim == rep.is_facet)
    out.write(f"agreement: {'yes' if good else 'NO'}\n")
    return OK if good else VIOLATED


def cmd_table1(args, out) -> int:
    _check_p(args)
    if args.p > 3:
        raise InputError("the listed descriptions cover p = 1, 2, 3")
    completeness = None if args.completeness == "auto" else args.completeness == "yes"
    rep = lab.verify_table1(args.n, args.p, completeness)
    for line in rep.lines():
        out.write(line + "\n")
    return OK if rep.passed else VIOLATED


def cmd_solve(args, out) -> int:
    from .solver import CutAuditError, SolverConfig, solve

    inst = parse_instance(_read(args.instance))
    cfg = SolverConfig(max_rounds=args.max_rounds, cuts_per_round=args.cuts_per_round,
                       seed=args.seed, audit=args.audit)
    try:
        rep = solve(inst, cfg)
    except CutAuditError as exc:
        out.write(f"audit failure: {exc}\n")
        return VIOLATED
    for line in rep.lines():
        out.write(line + "\n")
    if rep.root_bounds:
        out.write(f"root bound: {format_fraction(rep.root_bounds[-1])}\n")
    return OK


def cmd_separate(args, out) -> int:
    from .separation import DEFAULT_BUDGET, FractionalPoint, separate_all

    _check_p(args)
    d = _digraph(args)
    x = FractionalPoint(d, parse_point(_read(args.point), d))
    res = separate_all(x, args.p, seed=args.seed, budget=args.budget or DEFAULT_BUDGET)
    out.write(f"violated rows: {len(res)}\n")
    for line in res.lines():
        out.write(line + "\n")
    return OK


def _lift(args, d: Digraph, ineq: Inequality):
    """``(lifted, report)`` for the requested target, or raise InputError."""
    to, p = args.to, args.p
    if to == "cycle":
        big, dn = lift_to_cycle(ineq, d, p)
        return big, lab.check_cycle_facet(big, dn, p)
    if to in ("lower", "upper"):
        q = relax_lift(ineq, d, p, to, check=not args.no_check)
        return q, lab.check_relaxed_facet(q, d, p, to)
    if to == "undirected":
        q = to_undirected(ineq, d, p)
        if q is None:
            raise InputError(f"{ineq.family} has no undirected counterpart")
        return q, und.check_ufacet(q, und.UGraph(d.n), p)
    kind, _, arg = to.partition(":")
    if kind == "clone":
        q, big = clone_node_lift(ineq, d, p, _one("clone", arg), check=not args.no_check)
        return q, lab.check_facet(q, big, p)
    if kind == "set":
        R = _nodes("set", arg)
        q, big = set_lift(ineq, d, p, R, check=not args.no_check)
        return q, lab.check_facet(q, big, p + len(set(R)))
    raise InputError(f"unknown lift target {to!r}")


def cmd_lift(args, out) -> int:
    _check_p(args)
    d = _digraph(args)
    ineq = build(DIRECTED, d, args.p, args.family)
    out.write(f"source: {ineq}\n")
    try:
        lifted, rep = _lift(args, d, ineq)
    except LiftError as exc:
        out.write(f"lift refused: {exc}\n")
        report = getattr(exc, "report", None)
        if report is not None:
            for k, v in sorted(vars(report).items()):
                out.write(f"  {k}: {v}\n")
        return INPUT_ERROR
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(f"lifted: {lifted}\n")
    out.write(f"record: {dump_inequality(lifted)}\n")
    for line in rep.lines():
        out.write(line + "\n")
    return OK if rep.is_facet else VIOLATED


SWEEPS: dict[str, Callable] = {
    "nonneg": lambda d, p, args: fam.iter_nonneg(d),
    "degree": lambda d, p, args: fam.iter_degree(d),
    "mincut": lambda d, p, args: fam.iter_min_cuts(d),
    "osmincut": lambda d, p, args: fam.iter_one_sided_min_cuts(d),
    "gmaxcut": lambda d, p, args: fam.iter_gen_max_cuts(d, p, args.max_r, args.variant),
    "cardpath": lambda d, p, args: fam.iter_card_paths(d, p),
    "broom": lambda d, p, args: fam.iter_brooms(d),
}


def cmd_sweep(args, out) -> int:
    _check_p(args)
    d = _digraph(args)
    try:
        rows = sorted(SWEEPS[args.family](d, args.p, args), key=_natural)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write("params | pred_valid | valid | pred_facet | facet | agree\n")
    bad = 0
    for q in rows:
        pv, pf = fam.predicted_validity(q, d, args.p), fam.predicted_facet(q, d, args.p)
        valid, facet = lab.oracle_verdicts(q, d, args.p)
        ok = lab.agrees(pv, valid) and lab.agrees(pf, facet)
        bad += not ok
        cells = [param_text(q), str(pv), _yn(valid), str(pf), _yn(facet), "yes" if ok else "NO"]
        out.write(" | ".join(cells) + "\n")
    out.write(f"rows: {len(rows)}  disagreements: {bad}\n")
    return OK if bad == 0 else VIOLATED


def _yn(flag: bool) -> str:
    return "true" if flag else "false"


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _np(sp, mode=True):
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    if mode:
        sp.add_argument("--mode", choices=MODES, default=RESTRICTED)


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pathpoly", description="Exact tools for fixed-length (0,n)-path polytopes.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser, required=True)

    sp = sub.add_parser("enumerate", help="incidence bitstrings, one per line")
    _np(sp)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--cycles", action="store_true", help="p-cycles of the complete digraph on n nodes")
    g.add_argument("--bowties", type=int, metavar="K", help="p-bowties tied at node K")
    g.add_argument("--undirected", action="store_true")
    sp.set_defaults(run=cmd_enumerate)

    sp = sub.add_parser("dim", help="affine dimension by rank")
    _np(sp)
    sp.add_argument("--undirected", action="store_true")
    sp.set_defaults(run=cmd_dim)

    sp = sub.add_parser("verify", help="validity and facet check of one inequality")
    _np(sp)
    sp.add_argument("--file", help="JSON inequality records instead of a family")
    sp.add_argument("family", nargs="*")
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("uverify", help="the same for the undirected polytope")
    _np(sp, mode=False)
    sp.add_argument("family", nargs="+")
    sp.set_defaults(run=cmd_uverify)

    sp = sub.add_parser("table1", help="check the listed description for p <= 3")
    _np(sp, mode=False)
    sp.add_argument("--completeness", choices=("auto", "yes", "no"), default="auto")
    sp.set_defaults(run=cmd_table1)

    sp = sub.add_parser("solve", help="branch-and-cut on an instance file")
    sp.add_argument("instance")
    sp.add_argument("--audit", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-rounds", type=int, default=50)
    sp.add_argument("--cuts-per-round", type=int, default=10)
    sp.set_defaults(run=cmd_solve)

    sp = sub.add_parser("separate", help="violated rows for a fractional point")
    _np(sp)
    sp.add_argument("point")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int)
    sp.set_defaults(run=cmd_separate)

    sp = sub.add_parser("lift", help="lift an inequality and verify the result")
    _np(sp)
    sp.add_argument("--to", required=True, help="cycle | clone:K | set:R | lower | upper | undirected")
    sp.add_argument("--no-check", action="store_true", help="skip the hypothesis checks before lifting")
    sp.add_argument("family", nargs="+")
    sp.set_defaults(run=cmd_lift)

    sp = sub.add_parser("sweep", help="predicted vs oracle verdicts over a family")
    _np(sp)
    sp.add_argument("--family", required=True, choices=sorted(SWEEPS))
    sp.add_argument("--max-r", type=int, default=2)
    sp.add_argument("--variant", choices=("0n_in_S", "0n_in_T", "0_in_S_n_in_T", "0_in_T_n_in_S"))
    sp.set_defaults(run=cmd_sweep)
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = make_parser().parse_args(argv)
        return args.run(args, out)
    except ParseError as exc:
        err.write(f"error: {exc}\n")
    except InputError as exc:
        err.write(f"error: {exc}\n")
    return INPUT_ERROR


def main() -> None:
    sys.exit(run())
