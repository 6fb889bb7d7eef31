"""Command-line front end.

Exit codes: 0 complete factorization (or any other successful command),
2 nonzero obstacle, 3 parse or validation error, 4 unsupported type.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional, Sequence, Tuple

from . import engine
from .errors import LpdoError, ParseError, SymbolsNotCoprime, UnsupportedDimension
from .field import Session
from .operators import Lpdo, compose_all, gauge, symbol
from .parsing import parse_field, parse_operator, parse_type
from .symbols import SymbolPoly, format_symbol, gcd2

EXIT_OK = 0
EXIT_OBSTACLE = 2
EXIT_INVALID = 3
EXIT_UNSUPPORTED = 4


def operator_json(L: Lpdo) -> dict:
    return {
        "text": str(L),
        "terms": [{"index": list(idx), "coeff": str(c)} for idx, c in L.terms()],
    }


def symbol_json(S: SymbolPoly) -> dict:
    return {
        "degree": S.degree,
        "text": format_symbol(S),
        "terms": [{"index": list(idx), "coeff": str(c)} for idx, c in S.terms()],
    }


def order_json(o):
    return "-inf" if o == float("-inf") else int(o)


def result_document(result: engine.ObstacleResult, type_text: str) -> dict:
    return {
        "status": "factored" if result.factored else "obstacle",
        "type": type_text,
        "factors": [operator_json(F) for F in result.factors],
        "obstacle": operator_json(result.obstacle),
        "obstacle_order": order_json(result.obstacle_order),
        "class_representative": [symbol_json(s) for s in result.class_representative],
        "warnings": list(result.warnings),
    }


def error_document(exc: Exception) -> dict:
    return {
        "status": "error",
        "type": None,
        "factors": [],
        "obstacle": None,
        "obstacle_order": None,
        "class_representative": [],
        "warnings": [],
        "error": {"kind": type(exc).__name__, "message": str(exc)},
    }


def _read_operator_arg(text: str) -> str:
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return fh.read()
    return text


def _session(args) -> Session:
    session = Session(args.n, auto_declare=not args.declare)
    for decl in args.declare or []:
        name, _, rest = decl.partition("(")
        name = name.strip()
        if rest:
            if not rest.endswith(")"):
                raise ParseError(f"malformed declaration {decl!r}")
            deps = [v.strip() for v in rest[:-1].split(",") if v.strip()]
        else:
            deps = None
        try:
            session.declare(name, deps)
        except ValueError as exc:
            raise ParseError(f"bad declaration {decl!r}: {exc}") from None
    return session


def _read_seed(path: str, session: Session) -> List[Lpdo]:
    factors = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                factors.append(parse_operator(line, session))
    return factors


def _format_result(result: engine.ObstacleResult, verbose_factors: bool) -> str:
    lines = [f"status: {'factored' if result.factored else 'obstacle'}"]
    if verbose_factors:
        lines.append("factors:")
        lines.extend(f"  F{i} = {F}" for i, F in enumerate(result.factors, start=1))
    lines.append(f"obstacle: {result.obstacle}")
    lines.append(f"order: {order_json(result.obstacle_order)}")
    if result.class_representative:
        top = result.class_representative[0]
        lines.append(f"class: {format_symbol(top)}")
    lines.extend(f"warning: {w}" for w in result.warnings)
    return "\n".join(lines)


def _cmd_compose(args, session) -> Tuple[int, dict, str]:
    ops = [parse_operator(_read_operator_arg(t), session) for t in args.operators]
    L = compose_all(ops, session.n)
    return EXIT_OK, {"operator": operator_json(L)}, str(L)


def _cmd_symbol(args, session) -> Tuple[int, dict, str]:
    S = symbol(parse_operator(_read_operator_arg(args.operator), session))
    return EXIT_OK, {"symbol": symbol_json(S)}, format_symbol(S)


def _cmd_gauge(args, session) -> Tuple[int, dict, str]:
    L = parse_operator(_read_operator_arg(args.operator), session)
    g = parse_field(args.g, session)
    G = gauge(L, g)
    return EXIT_OK, {"operator": operator_json(G)}, str(G)


def _cmd_codim(args, session) -> Tuple[int, dict, str]:
    degrees = [int(v) for v in args.degrees.split(",") if v.strip()]
    value = engine.codimension(args.n, args.d, degrees)
    return EXIT_OK, {"codimension": value}, str(value)


def _cmd_counts(args, session) -> Tuple[int, dict, str]:
    T = parse_type(args.type, session)
    eqs, unknowns = engine.system_counts(T, args.t)
    return EXIT_OK, {"equations": eqs, "variables": unknowns}, f"equations: {eqs}\nvariables: {unknowns}"


def _run_factor(args, session, verbose_factors: bool) -> Tuple[int, dict, str]:
    L = parse_operator(_read_operator_arg(args.operator), session)
    T = parse_type(args.type, session)
    seed_path = getattr(args, "seed", None)
    if seed_path:
        if len(T) != 2:
            raise ParseError("--seed is supported for two-factor types only")
        factors = _read_seed(seed_path, session)
        seed_order = args.seed_order
        if seed_order is None:
            seed_order = T.order - gcd2(*T.factors).degree
        seed = engine.PartialFactorization(factors, seed_order)
        result = engine.factor_two_noncoprime(L, T, seed)
    else:
        result = engine.factor(L, T)
    code = EXIT_OK if result.factored else EXIT_OBSTACLE
    return code, result_document(result, str(T)), _format_result(result, verbose_factors)


def _cmd_factor(args, session):
    return _run_factor(args, session, verbose_factors=True)


def _cmd_obstacle(args, session):
    return _run_factor(args, session, verbose_factors=False)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in JSON output")
    common.add_argument(
        "--declare",
        action="append",
        metavar="SPEC",
        help='declare a function symbol, e.g. "a(x,y)" or "f1(y)"; '
        "without any declaration unknown names depend on every variable",
    )
    common.add_argument("-n", type=int, default=2, help="number of base variables (default 2)")

    parser = argparse.ArgumentParser(
        prog="lpdofactor",
        description="Factor linear partial differential operators and compute obstacles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", parents=[common], help="compose operators left to right")
    p.add_argument("operators", nargs="+", metavar="OP")
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("symbol", parents=[common], help="print the symbol of an operator")
    p.add_argument("operator", metavar="OP")
    p.set_defaults(func=_cmd_symbol)

    p = sub.add_parser("factor", parents=[common], help="factor along a type, reporting any obstacle")
    p.add_argument("--type", required=True, metavar="T")
    p.add_argument("--seed", metavar="FILE", help="two-factor seed, one operator per line")
    p.add_argument("--seed-order", type=int, help="order of the seed (default d - deg gcd)")
    p.add_argument("operator", metavar="OP")
    p.set_defaults(func=_cmd_factor)

    p = sub.add_parser("obstacle", parents=[common], help="compute the common obstacle of a type")
    p.add_argument("--type", required=True, metavar="T")
    p.add_argument("operator", metavar="OP")
    p.set_defaults(func=_cmd_obstacle)

    p = sub.add_parser("gauge", parents=[common], help="apply g^-1 o L o g")
    p.add_argument("--g", required=True, metavar="EXPR")
    p.add_argument("operator", metavar="OP")
    p.set_defaults(func=_cmd_gauge)

    p = sub.add_parser("codim", parents=[common], help="codimension of the factorable operators")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--degrees", required=True, metavar="LIST")
    p.set_defaults(func=_cmd_codim)

    p = sub.add_parser("counts", parents=[common], help="equations and unknowns of one descent step")
    p.add_argument("--type", required=True, metavar="T")
    p.add_argument("-t", type=int, required=True)
    p.set_defaults(func=_cmd_counts)
    return parser


def run_command(argv: Sequence[str]) -> Tuple[int, dict, str]:
    """Run one invocation; returns (exit code, JSON document, text output)."""
    args = build_parser().parse_args(list(argv))
    start = time.perf_counter()
    try:
        session = _session(args)
        code, doc, text = args.func(args, session)
    except (SymbolsNotCoprime, UnsupportedDimension) as exc:
        return EXIT_UNSUPPORTED, error_document(exc), f"error: {exc}"
    except (LpdoError, ValueError, OSError) as exc:
        return EXIT_INVALID, error_document(exc), f"error: {exc}"
    if args.timing:
        doc["timing"] = {"seconds": time.perf_counter() - start}
    return code, doc, text


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, doc, text = run_command(argv)
    as_json = "--json" in argv
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif code in (EXIT_INVALID, EXIT_UNSUPPORTED):
        print(text, file=sys.stderr)
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
