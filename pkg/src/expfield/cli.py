"""Command line entry point: ``expfield <subcommand> ...``.

Exit codes: 0 on success, 1 on a domain or precision error, 2 on a usage or
parse error.
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ExpFieldError, ParseError
from .explog import exp_p, log_p
from .expr import evaluate, parse_expression, parse_expression_list
from .hahn import _as_series, _TSymbol, as_group_element, derive, hahn_exp, parse_series, series_functions
from .padic import DEFAULT_PRECISION, PadicNumber, check_prime, from_rational, uniformizer
from .relations import find_relation
from .scan import cmd_scan, parse_scan_config, report_csv, report_json
from .variety import (
    bounded_degree_independence,
    constant_combinations,
    hahn_point_membership,
    parse_variety,
)


class UsageError(Exception):
    pass


def _padic_names(p, e, r):
    names = {"p": from_rational(p, p, r, e)}
    if e > 1:
        names["pi"] = uniformizer(p, e, r)
    return names


def _to_padic(value, p, e, r):
    if isinstance(value, PadicNumber):
        return value
    return from_rational(value, p, r, e)


def parse_value(text, p, e=1, r=DEFAULT_PRECISION, functions=None):
    """A p-adic value written as an expression in rationals, p and pi."""
    value = evaluate(parse_expression(text), _padic_names(p, e, r), functions)
    return _to_padic(value, p, e, r)


def cmd_exp(args):
    check_prime(args.prime)
    prec = Fraction(args.prec)
    r = args.digits or max(DEFAULT_PRECISION, int(prec) + 1)
    x = parse_value(args.value, args.prime, args.ram, r)
    return str(exp_p(x, prec)) + "\n"


def cmd_log(args):
    check_prime(args.prime)
    prec = Fraction(args.prec)
    r = args.digits or max(DEFAULT_PRECISION, int(prec) + 1)
    y = parse_value(args.value, args.prime, args.ram, r)
    return str(log_p(y, prec)) + "\n"


def cmd_relation(args):
    p, N, B = args.prime, args.digits, args.bound
    check_prime(p)
    work = args.prec or N + 10
    names = _padic_names(p, args.ram, work)

    def exp(x):
        return exp_p(_to_padic(x, p, args.ram, work), work)

    values = [
        _to_padic(evaluate(node, names, {"exp": exp}), p, args.ram, work)
        for node in parse_expression_list(args.values)
    ]
    rel = find_relation(values, N, B, Fraction(args.delta))
    out = {
        "prime": p,
        "digits": N,
        "bound": B,
        "relation": list(rel.m) if rel else "none",
        "certified_precision": str(rel.certified_precision) if rel else None,
    }
    return json.dumps(out) + "\n"


def cmd_scan_cli(args):
    path = Path(args.config)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    cfg = parse_scan_config(text, base_dir=path.parent)
    if args.seed is not None:
        cfg.seed = args.seed
    report = cmd_scan(cfg, threads=args.threads)
    if args.csv:
        Path(args.csv).write_text(report_csv(report), encoding="utf-8")
    return report_json(report)


def _series_list(text, rank, order):
    """Comma-separated series, where exp(...) is truncated at ``order``."""
    env = {"t": _TSymbol(rank)}
    functions = series_functions(rank, order)
    try:
        items = parse_expression_list(text)
        return [_as_series(evaluate(node, env, functions), rank) for node in items]
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc


def _parse_order(text):
    try:
        return tuple(Fraction(c) for c in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad truncation order {text!r}") from exc


def cmd_axcheck(args):
    rank = args.rank
    K = as_group_element(_parse_order(args.order), rank)
    ys = _series_list(args.y, rank, K)
    zs = _series_list(args.z, rank, K) if args.z else [hahn_exp(y, K) for y in ys]
    if len(zs) != len(ys):
        raise ParseError(f"{len(ys)} y-series but {len(zs)} z-series")
    pairs_ok = all(derive(z).equal_below(z * derive(y), K) for y, z in zip(ys, zs))
    verdict = bounded_degree_independence(ys + zs, args.degree, K)
    out = {
        "n": len(ys),
        "degree": args.degree,
        "order": str(K),
        "exp_pairs": pairs_ok,
        "independence": str(verdict),
    }
    if hasattr(verdict, "polynomial"):
        out["constant_combinations"] = [list(m) for m in constant_combinations(ys, K)]
    if args.variety:
        V = parse_variety(Path(args.variety).read_text(encoding="utf-8"))
        bad = hahn_point_membership(V, ys, zs, K)
        out["variety_member"] = bad is None
    return json.dumps(out, indent=2) + "\n"


def cmd_hahn(args):
    rank = args.rank
    order = None if args.order is None else _parse_order(args.order)
    if args.exprs:
        exprs = args.exprs
    else:
        source = open(args.input, encoding="utf-8") if args.input else sys.stdin
        with source:
            exprs = [line.strip() for line in source if line.strip() and not line.lstrip().startswith("#")]
    out = []
    for text in exprs:
        out.append(str(parse_series(text, rank=rank, order=order)))
    return "\n".join(out) + ("\n" if out else "")


def _add_globals(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="RNG seed (overrides the config)")
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1)
    parser.add_argument("--output", default=default, help="write output to this file")


def build_parser():
    parser = argparse.ArgumentParser(prog="expfield", description=__doc__.splitlines()[0])
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("exp", "p-adic exponential"), ("log", "p-adic logarithm")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--prime", type=int, required=True)
        sp.add_argument("--ram", type=int, default=1, help="ramification index e (pi^e = p)")
        sp.add_argument("--prec", default="20", help="target absolute precision (rational)")
        sp.add_argument("--digits", type=int, default=None, help="relative precision of the input")
        sp.add_argument("--value", required=True, help="expression in rationals, p and pi")
        _add_globals(sp, suppress=True)

    sp = sub.add_parser("relation", help="integer relation among p-adic values")
    sp.add_argument("--prime", type=int, required=True)
    sp.add_argument("--digits", type=int, required=True, help="N: relations modulo p^N")
    sp.add_argument("--bound", type=int, required=True, help="height bound B")
    sp.add_argument("--values", required=True, help="comma-separated values; exp(q) allowed")
    sp.add_argument("--ram", type=int, default=1)
    sp.add_argument("--prec", type=int, default=None, help="working precision (default N + 10)")
    sp.add_argument("--delta", default="3/4", help="LLL parameter")
    _add_globals(sp, suppress=True)

    sp = sub.add_parser("scan", help="multi-prime scan driven by a config file")
    sp.add_argument("config")
    sp.add_argument("--csv", default=None, help="also write a CSV flattening here")
    _add_globals(sp, suppress=True)

    sp = sub.add_parser("axcheck", help="bounded-degree independence of (y, exp y) in a Hahn field")
    sp.add_argument("--y", required=True, help="comma-separated series, e.g. 't, 2*t'")
    sp.add_argument("--z", default=None, help="comma-separated series; default exp(y_i)")
    sp.add_argument("--degree", type=int, default=6)
    sp.add_argument("--order", default="100", help="truncation order K (comma-separated for rank > 1)")
    sp.add_argument("--rank", type=int, default=1)
    sp.add_argument("--variety", default=None, help="also check (y, z) lies on this variety")
    _add_globals(sp, suppress=True)

    sp = sub.add_parser("hahn", help="evaluate Hahn series expressions")
    sp.add_argument("exprs", nargs="*", help="expressions (default: one per line from --input or stdin)")
    sp.add_argument("--input", default=None)
    sp.add_argument("--rank", type=int, default=None)
    sp.add_argument("--order", default=None, help="truncation order used by exp(...)")
    _add_globals(sp, suppress=True)
    return parser


_COMMANDS = {
    "exp": cmd_exp,
    "log": cmd_log,
    "relation": cmd_relation,
    "scan": cmd_scan_cli,
    "axcheck": cmd_axcheck,
    "hahn": cmd_hahn,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"expfield: parse error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"expfield: {exc}", file=sys.stderr)
        return 2
    except ExpFieldError as exc:
        print(f"expfield: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"expfield: error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
