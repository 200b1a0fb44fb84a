"""Command-line surface: ``recipcas SUBCOMMAND ...``.

Exit status is 0 on success or a passing certificate, 1 on a certificate
failure (or an internal contradiction) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any

from . import __version__
from .certificates import SuiteReport, certificate_registry, run_all, run_certificate
from .config import get_settings
from .errors import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, BaseError, ValidationError
from .length import brute_force_length, cofactor_product, restrict_to_subring
from .observability import configure_logging
from .parser import Value, as_rational, collapse, format_value, parse_expression
from .poly import Polynomial
from .recip import RecipSum, invert_unit, sigma, star_transform
from .valuation import parse_valuation_spec, value

logger = logging.getLogger(__name__)


def _emit_result(args: argparse.Namespace, text: str, payload: dict[str, Any]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _parse(args: argparse.Namespace, text: str) -> Value:
    return parse_expression(text, args.vars)


def as_polynomial(parsed: Value, what: str) -> Polynomial:
    """Require a polynomial value.

    Raises:
        ValidationError: If the value is not a polynomial
    """
    collapsed = collapse(as_rational(parsed)) if isinstance(parsed, RecipSum) else parsed
    if not isinstance(collapsed, Polynomial):
        raise ValidationError(f"{what} expects a polynomial, got '{format_value(parsed)}'")
    return collapsed


def as_recip_sum(parsed: Value, what: str) -> RecipSum:
    """Require a reciprocal sum; a nonzero constant c is read as recip(1/c).

    Raises:
        ValidationError: If the value is neither a RecipSum nor a nonzero constant
    """
    if isinstance(parsed, RecipSum):
        return parsed
    if isinstance(parsed, Polynomial) and parsed.is_constant and not parsed.is_zero:
        return RecipSum(parsed.n, (Polynomial.constant(parsed.n, 1 / parsed.constant_value()),))
    raise ValidationError(
        f"{what} expects a reciprocal sum such as 'recip(X) + 1', got '{format_value(parsed)}'"
    )


# Subcommands


def cmd_eval(args: argparse.Namespace) -> int:
    result = collapse(as_rational(_parse(args, args.expr)))
    _emit_result(args, format_value(result), {"value": format_value(result)})
    return EXIT_OK


def cmd_sigma(args: argparse.Namespace) -> int:
    result = collapse(sigma(as_rational(_parse(args, args.expr))))
    _emit_result(args, format_value(result), {"value": format_value(result)})
    return EXIT_OK


def cmd_star(args: argparse.Namespace) -> int:
    f = as_polynomial(_parse(args, args.expr), "star")
    form = star_transform(f)
    text = "\n".join(
        [
            f"f* = {form.fstar}",
            f"a  = ({', '.join(map(str, form.a))})",
            f"t  = ({', '.join(map(str, form.t))})",
        ]
    )
    _emit_result(args, text, {"fstar": str(form.fstar), "a": list(form.a), "t": list(form.t)})
    return EXIT_OK


def cmd_val(args: argparse.Namespace) -> int:
    spec = parse_valuation_spec(args.spec, args.vars)
    result = value(spec, as_rational(_parse(args, args.expr)))
    _emit_result(args, str(result), {"spec": str(spec), "value": result.to_json()})
    return EXIT_OK


def cmd_invert(args: argparse.Namespace) -> int:
    alpha = as_recip_sum(_parse(args, args.expr), "invert")
    inverse = invert_unit(alpha, budget=args.budget)
    product = collapse(alpha.value * inverse.value)
    text = f"inverse = {inverse}\nproduct = {format_value(product)}"
    _emit_result(
        args,
        text,
        {"inverse": str(inverse), "terms": len(inverse), "product": format_value(product)},
    )
    return EXIT_OK


def cmd_length(args: argparse.Namespace) -> int:
    r = as_rational(_parse(args, args.expr))
    found = brute_force_length(r, args.deg, args.height, args.terms)
    _emit_result(args, "none" if found is None else str(found), {"length": found})
    return EXIT_OK


def cmd_restrict(args: argparse.Namespace) -> int:
    alpha = as_recip_sum(_parse(args, args.expr), "restrict")
    restricted = restrict_to_subring(alpha, args.keep)
    _emit_result(args, str(restricted), {"value": str(restricted), "terms": len(restricted)})
    return EXIT_OK


def cmd_cofactor(args: argparse.Namespace) -> int:
    alpha = as_recip_sum(_parse(args, args.expr), "cofactor")
    cofactor = cofactor_product(alpha)
    _emit_result(args, str(cofactor), {"value": str(cofactor)})
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    if args.name == "list":
        for name in certificate_registry.names():
            print(f"{name:<26} {certificate_registry.get(name).description}")
        return EXIT_OK

    if args.name == "all":
        if args.params:
            raise ValidationError("'check all' takes no parameters")
        suite = SuiteReport.of(run_all(args.workers))
        print(suite.model_dump_json(indent=2) if args.json else suite.to_text())
        return EXIT_OK if suite.passed else EXIT_FAILURE

    report = run_certificate(args.name, args.params, n=args.vars)
    print(report.model_dump_json(indent=2) if args.json else report.to_text())
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    settings = get_settings()
    uvicorn.run(
        create_app(),
        host=args.host or settings.host,
        port=args.port or settings.port,
        log_level=settings.log_level.lower(),
    )
    return EXIT_OK


# Argument parsing


def _common_options() -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--vars",
        type=int,
        default=argparse.SUPPRESS,
        help="number of variables n (default from RECIPCAS_VARS, else 2)",
    )
    common.add_argument(
        "--json",
        action="store_true",
        default=argparse.SUPPRESS,
        help="emit a structured JSON document instead of text",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipcas",
        description="Exact algebra in reciprocal complements of polynomial rings.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--vars", type=int, default=None, help=argparse.SUPPRESS)
    parser.add_argument("--json", action="store_true", default=False, help=argparse.SUPPRESS)
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=None,
        help="log level (default from LOG_LEVEL)",
    )

    common = _common_options()
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], int], help_text: str) -> Any:
        command = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        command.set_defaults(handler=handler)
        return command

    add("eval", cmd_eval, "normalize an expression and print its canonical form").add_argument(
        "expr"
    )
    add("sigma", cmd_sigma, "apply X_i -> 1/X_i").add_argument("expr")
    add("star", cmd_star, "print f*, a(f) and t(f) of a polynomial").add_argument("expr")

    val = add("val", cmd_val, "evaluate a valuation SPEC on an expression")
    val.add_argument(
        "spec",
        help=(
            "xadic:i | order | wsub:p,q,h | gauss:VAR:SPEC | lex:VAR:SPEC | sigma:SPEC; "
            "the inner SPEC of gauss/lex acts on the other n-1 variables, renumbered "
            "X1.. in order (n=2: lex:Y:xadic:X, not xadic:Y)"
        ),
    )
    val.add_argument("expr")

    invert = add("invert", cmd_invert, "invert a unit given as a reciprocal sum")
    invert.add_argument("expr")
    invert.add_argument("--budget", type=int, default=None, help="maximum denominators per step")

    length = add("length", cmd_length, "bounded search for the reciprocal length")
    length.add_argument("expr")
    length.add_argument("--deg", type=int, required=True, help="degree bound D")
    length.add_argument("--height", type=int, required=True, help="coefficient height bound H")
    length.add_argument("--terms", type=int, required=True, help="term bound T")

    restrict = add("restrict", cmd_restrict, "drop denominators involving X_(j+1)..X_n")
    restrict.add_argument("expr")
    restrict.add_argument("--keep", type=int, required=True, help="keep Q[X1..Xj]")

    add("cofactor", cmd_cofactor, "print F*alpha for F the product of denominators").add_argument(
        "expr"
    )

    check = add("check", cmd_check, "run a certificate, 'all' of them, or 'list' them")
    check.add_argument("name")
    check.add_argument("params", nargs="*", help="positional certificate parameters")
    check.add_argument("--workers", type=int, default=None, help="threads for 'check all'")

    serve = add("serve", cmd_serve, "serve the HTTP API")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)

    return parser


def run_command(argv: Sequence[str] | None = None) -> int:
    """Run one CLI invocation and return its exit status.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        0 on success, 1 on certificate failure, 2 on usage or input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        settings = get_settings()
        configure_logging(args.log_level or settings.log_level)
        if args.vars is None:
            args.vars = settings.default_vars
        if args.vars < 1:
            raise ValidationError("--vars must be at least 1", {"vars": args.vars})
        status: int = args.handler(args)
        return status
    except BaseError as e:
        logger.debug(
            "Command failed",
            extra={
                "command": args.command,
                "error_type": type(e).__name__,
                "exit_code": e.exit_code,
            },
        )
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(
            "Unexpected error",
            extra={"command": args.command, "error_type": type(e).__name__},
            exc_info=True,
        )
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


def main() -> None:
    sys.exit(run_command())
