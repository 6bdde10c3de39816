"""Command-line entry point.

Every command prints one JSON report on standard output and a short human
summary on standard error.  Exit status: 0 when the verdict is a pass, 1 on a
violation, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from gmpy2 import mpq

from .errors import ParseError, TconvexError
from .report import PASS_VERDICTS, Report, RunConfig, dump_json

FAIL_VERDICTS = {"violated", "fail", "fails", "inconsistent", "not-found-within-budget"}


class InputError(Exception):
    """Malformed input; the message carries a path and position."""


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _rational(text: str):
    try:
        q = mpq(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None
    if q <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return q


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _split(text: str) -> list[str]:
    sep = ";" if ";" in text else ","
    return [s.strip() for s in text.split(sep) if s.strip()]


def _json_path(obj, target: str, path: str = "$"):
    """Path of the first string leaf equal to ``target``."""
    if isinstance(obj, str):
        return path if obj == target else None
    items = obj.items() if isinstance(obj, dict) else enumerate(obj) if isinstance(obj, list) else ()
    for k, v in items:
        sub = f"{path}.{k}" if isinstance(k, str) else f"{path}[{k}]"
        hit = _json_path(v, target, sub)
        if hit:
            return hit
    return None


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _with_path(path: str, obj, fn):
    """Run ``fn(obj)``, turning parse errors into path+position diagnostics."""
    try:
        return fn(obj)
    except ParseError as exc:
        where = _json_path(obj, exc.text) if exc.text else None
        pos = f"position {exc.position}: " if exc.position >= 0 else ""
        raise InputError(f"{path}: {where or '$'}: {pos}{exc.message}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: $: malformed input ({type(exc).__name__}: {exc})") from None


def load_candidate(path: str, real: bool = False):
    from .archimedean import RealStratification
    from .tstrat import TStratCandidate

    obj = load_json(path)
    cls = RealStratification if real else TStratCandidate
    cand = _with_path(path, obj, cls.from_json)
    if not cand.name:
        cand.name = os.path.splitext(os.path.basename(path))[0]
    return cand


def _parse_point(text: str, vars: Sequence[str] = ()) -> tuple:
    from .formula import parse_constant

    parts = _split(text)
    named = {}
    plain = []
    for p in parts:
        if "=" in p:
            k, v = p.split("=", 1)
            named[k.strip()] = parse_constant(v.strip())
        else:
            plain.append(parse_constant(p))
    if named:
        missing = [v for v in vars if v not in named]
        if missing:
            raise ParseError(f"no value for {', '.join(missing)}", 0, text)
        return tuple(named[v] for v in vars)
    return tuple(plain)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_eval(args, config):
    from .formula import parse_formula, parse_poly
    from .rv import res, rvo
    from .series import render_value

    try:
        obj = parse_poly(args.expr)
        kind = "poly"
    except ParseError as first:
        try:
            obj = parse_formula(args.expr)
        except ParseError:
            raise first from None
        kind = "formula"
    out = {"input": args.expr, "kind": kind, "vars": list(obj.vars)}
    if kind == "poly" and not obj.vars:
        x = obj.constant()
        out.update(value=x, val=render_value(x.val_lower_bound()) if x.terms or x.is_exact else None)
        if x.terms or x.is_exact:
            out["rv"] = str(rvo(x))
            if x.val_lower_bound() >= 0:
                out["res"] = res(x)
        return Report("eval", "ok", out, config)
    if args.at is None:
        out["normalized"] = str(obj)
        if kind == "poly":
            out["gradient"] = [str(g) for g in obj.gradient()]
        return Report("eval", "ok", out, config)
    pt = _parse_point(args.at, obj.vars)
    out["point"] = list(pt)
    if kind == "poly":
        v = obj.evaluate(pt)
        out["value"] = v
        if v.terms or v.is_exact:
            out["val"] = render_value(v.val_lower_bound())
            out["rv"] = str(rvo(v))
    else:
        out["member"] = obj.contains(pt)
    return Report("eval", "ok", out, config)


def cmd_cells(args, config):
    from .cells import cell_decompose_1var

    cells = cell_decompose_1var(args.formula)
    return Report("cells", "ok", {"formula": args.formula, "count": len(cells),
                                  "cells": [c.to_json() for c in cells]}, config)


def cmd_normal_form(args, config):
    from .cells import normal_form_1var

    nf = normal_form_1var(args.formula)
    return Report("normal-form", "ok", {"formula": args.formula, "normal_form": nf.to_json(),
                                        "text": str(nf)}, config)


def cmd_centres(args, config):
    from .cells import ball_decomposition_with_centres
    from .formula import parse_constant
    from .sampling import sample_line

    S0 = None if args.S0 in ("-", "") else [parse_constant(s) for s in _split(args.S0)]
    bd = ball_decomposition_with_centres(S0, args.formula)
    if args.at:
        pts = [parse_constant(s) for s in _split(args.at)]
    else:
        pts = sample_line(args.points, config.seed, bd.S0)
    rows = []
    for b in pts:
        fc = bd.fiber_code(b)
        rows.append({"b": b, "code": [str(c) for c in bd.code(b)],
                     "fiber_code": fc if isinstance(fc, int) else str(fc),
                     "centre": bd.centre(b), "fiber": str(bd.fiber(b))})
    return Report("centres", "ok", {"S0": list(bd.S0), "points": rows}, config)


def cmd_jp_check(args, config):
    from .jacobian import jp_run

    src = args.f
    domain = args.domain
    pieces = args.pieces
    if src.endswith(".json") or os.path.isfile(src):
        obj = load_json(src)
        if isinstance(obj, str):
            obj = {"f": obj}
        if not isinstance(obj, dict) or "f" not in obj:
            raise InputError(f"{src}: $: expected an object with key 'f'")
        src_f = obj["f"]
        domain = obj.get("domain", domain)
        pieces = int(obj.get("pieces", pieces))
        return _with_path(src, obj, lambda _: jp_run(src_f, domain, pieces, config.pairs,
                                                      config.seed, config.budget, config))
    return jp_run(src, domain, pieces, config.pairs, config.seed, config.budget, config)


def cmd_risometry(args, config):
    from .tstrat import risometry_check

    return risometry_check(_split(args.map), args.domain, config.pairs, config.seed,
                           config.budget, config=config)


def cmd_tstrat_verify(args, config):
    from .formula import Partition, parse_formula
    from .tstrat import tstrat_verify

    cand = load_candidate(args.candidate)
    reflected = []
    for text in args.reflected or ():
        reflected.append(Partition([parse_formula(s, cand.vars) for s in _split(text)]))
    return tstrat_verify(cand, reflected, balls=args.balls, config=config)


def cmd_tangent_cone(args, config):
    from .cones import induced_cone_partition, tangent_cone_hypersurface, tangent_cone_membership
    from .formula import parse_formula, parse_poly
    from .tstrat import tstrat_verify

    if args.target.endswith(".json"):
        cand = load_candidate(args.target)
        cp = induced_cone_partition(cand, args.point)
        rep = tstrat_verify(cp, balls=args.balls, config=config)
        rep.check = "tangent-cone"
        rep.details["induced_partition"] = cp.to_json()
        return rep
    try:
        X = parse_poly(args.target)
    except ParseError:
        X = parse_formula(args.target)
    out = {"input": args.target, "p": args.point}
    if hasattr(X, "lowest_form"):
        out["lowest_form"] = str(tangent_cone_hypersurface(X, args.point))
    if args.direction is None:
        if "lowest_form" not in out:
            raise InputError("a formula needs --direction")
        return Report("tangent-cone", "ok", out, config)
    m = tangent_cone_membership(X, args.point, _split(args.direction), gamma=args.gamma,
                                seed=config.seed)
    out["membership"] = m.to_json()
    return Report("tangent-cone", m.status, out, config)


def cmd_whitney(args, config):
    from .archimedean import whitney_check, whitney_suite

    rs = load_candidate(args.candidate, real=True)
    if args.upper is not None or args.lower is not None:
        if args.upper is None or args.lower is None or args.point is None:
            raise InputError("--upper, --lower and --point go together")
        w = whitney_check(rs.strata[args.upper], rs.strata[args.lower], args.point,
                          args.curves, config.seed, pair=(args.upper, args.lower))
        return Report("whitney", w.verdict, {"candidate": rs.name, "reports": [w]}, config)
    ok, reps = whitney_suite(rs, args.curves, config.seed)
    return Report("whitney", "holds" if ok else "fails",
                  {"candidate": rs.name, "reports": reps}, config)


def cmd_arch_check(args, config):
    from .archimedean import theorem_main4_suite

    rs = load_candidate(args.candidate, real=True)
    rep = theorem_main4_suite(rs, config, args.curves)
    if rep.verdict != "inconsistent":
        both = rep["tstrat"] in PASS_VERDICTS and rep["whitney"] == "holds"
        rep.verdict = "pass" if both else "fail"
    rep.check = "arch-check"
    return rep


def cmd_exp_demo(args, config):
    from .archimedean import exponential_demo

    N = [int(s) for s in _split(args.N)]
    return exponential_demo(args.a, args.b, N, config=config)


def cmd_corpus(args, config):
    from .corpus import LIMITS, corpus_report

    only = None
    if args.only is not None:
        only = [int(s) for s in _split(args.only)]

    def progress(row, dt):
        if not args.quiet:
            lim = LIMITS.get(row["id"])
            tail = f" (limit {lim} s)" if lim else ""
            print(f"  [{row['id']:>2}] {row['name']:<20} {row['verdict']:<5} {dt:7.2f} s{tail}",
                  file=sys.stderr, flush=True)

    rep, _ = corpus_report(config, only, progress)
    return rep


COMMANDS = {
    "eval": cmd_eval,
    "cells": cmd_cells,
    "normal-form": cmd_normal_form,
    "centres": cmd_centres,
    "jp-check": cmd_jp_check,
    "risometry": cmd_risometry,
    "tstrat-verify": cmd_tstrat_verify,
    "tangent-cone": cmd_tangent_cone,
    "whitney": cmd_whitney,
    "arch-check": cmd_arch_check,
    "exp-demo": cmd_exp_demo,
    "corpus": cmd_corpus,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--truncation", type=_rational, default=mpq(8),
                   help="truncation order of series (default 8)")
    g.add_argument("--samples", type=_positive, default=200)
    g.add_argument("--pairs", type=_positive, default=10_000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-exp-denominator", type=_positive, default=64)
    g.add_argument("--budget", type=_positive, default=1_000)
    g.add_argument("--json", action="store_true", help="JSON report on stdout (the default)")
    g.add_argument("--quiet", action="store_true", help="no summary on stderr")

    p = argparse.ArgumentParser(prog="tconvex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("eval", parents=[common], help="parse and evaluate a series, polynomial or formula")
    s.add_argument("expr")
    s.add_argument("--at", help="point, e.g. 'x=1+t; y=t^(1/2)'")

    s = sub.add_parser("cells", parents=[common], help="one-variable cell decomposition")
    s.add_argument("formula")

    s = sub.add_parser("normal-form", parents=[common], help="one-variable normal form")
    s.add_argument("formula")

    s = sub.add_parser("centres", parents=[common], help="ball decomposition with centres")
    s.add_argument("S0", help="centres separated by ';' or ',', or '-' to take them from --formula")
    s.add_argument("--formula")
    s.add_argument("--at", help="points to classify")
    s.add_argument("--points", type=_positive, default=10)

    s = sub.add_parser("jp-check", parents=[common], help="Jacobian property on a built partition")
    s.add_argument("f", help="polynomial or JSON file {f, domain?, pieces?}")
    s.add_argument("--domain")
    s.add_argument("--pieces", type=_positive, default=6)

    s = sub.add_parser("risometry", parents=[common], help="sampled risometry test")
    s.add_argument("map", help="components separated by ';'")
    s.add_argument("domain", help="O, M, R or a formula")

    s = sub.add_parser("tstrat-verify", parents=[common], help="necessary conditions of a t-stratification")
    s.add_argument("candidate", help="candidate JSON file")
    s.add_argument("--balls", type=_positive, default=24)
    s.add_argument("--reflected", action="append", help="partition as formulas separated by ';'")

    s = sub.add_parser("tangent-cone", parents=[common], help="lowest form, membership or induced partition")
    s.add_argument("target", help="polynomial, formula, or candidate JSON file")
    s.add_argument("point")
    s.add_argument("--direction")
    s.add_argument("--gamma", type=_rational, default=mpq(3))
    s.add_argument("--balls", type=_positive, default=24)

    s = sub.add_parser("whitney", parents=[common], help="Whitney (a)/(b) on series arcs")
    s.add_argument("candidate")
    s.add_argument("--upper", type=int)
    s.add_argument("--lower", type=int)
    s.add_argument("--point")
    s.add_argument("--curves", type=_positive, default=8)

    s = sub.add_parser("arch-check", parents=[common], help="lifted t-stratification and Whitney together")
    s.add_argument("candidate")
    s.add_argument("--curves", type=_positive, default=8)

    s = sub.add_parser("exp-demo", parents=[common], help="floating-point probe for x^y")
    s.add_argument("--a", type=_rational, default=mpq(2))
    s.add_argument("--b", type=_rational, default=mpq(3))
    s.add_argument("--N", default="1000,1000000")

    s = sub.add_parser("corpus", parents=[common], help="run the acceptance scenarios")
    s.add_argument("--only", help="criterion numbers separated by ','")
    return p


def exit_code(verdict: str) -> int:
    if verdict in PASS_VERDICTS:
        return 0
    if verdict in FAIL_VERDICTS:
        return 1
    return 2


def _summary(rep: Report) -> str:
    line = f"{rep.check}: {rep.verdict}"
    for key in ("min_margin", "pairs_checked", "balls_checked", "count"):
        if key in rep.details:
            line += f"  {key}={rep.to_json()[key]}"
    return line


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(args.truncation, args.samples, args.pairs, args.seed,
                           args.max_exp_denominator, args.budget)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        with config.precision():
            rep = COMMANDS[args.command](args, config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"error: <argument>: {exc}", file=sys.stderr)
        return 2
    except TconvexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if rep.config is None:
        rep.config = config
    sys.stdout.write(rep.dumps() + "\n")
    if not args.quiet:
        print(_summary(rep), file=sys.stderr)
    return exit_code(rep.verdict)


if __name__ == "__main__":
    sys.exit(main())
