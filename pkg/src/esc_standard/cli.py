"""Command-line front end.

Exit codes: 0 success, 1 bad input or unmet precondition, 2 internal error.
Data goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import EscError, InvariantViolation
from .fileformats import (
    assessment_to_dict,
    dumps_json,
    load_matrix_config,
    load_scenario,
    load_series,
    snapshot_to_dict,
    write_report,
)
from .scenario import simulate
from .standard import EnergyMatrix, check_snapshot, growth_condition, money_supply
from .timeutil import parse_timestamp, years_to_seconds
from .units import EnergyQuantity, convert, format_quantity, parse_number, parse_unit

CONVENTIONS = """\
conventions:
  1 year = 8760 hours (365 days), so 1 GWy = 8760 GWh exactly.
  Timestamps are UTC, written YYYY-MM-DDThh:mm:ssZ.
  Averages are trailing windows [t - window, t].
  In simulations an event takes effect at its timestamp; an evaluation at
  that exact instant sees the post-event matrix.
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors are user errors: exit 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="esc-standard",
        description="Energy-supply-capacity monetary standard: money supply, abundance and growth checks.",
        epilog=CONVENTIONS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def inputs(p: argparse.ArgumentParser) -> None:
        p.add_argument("--matrix", required=True, help="matrix config JSON")
        p.add_argument("--series", required=True, help="capacity series CSV")
        p.add_argument("--at", required=True, help="evaluation time, YYYY-MM-DDThh:mm:ssZ")

    fmt = argparse.RawDescriptionHelpFormatter
    p = sub.add_parser("compute", help="money supply M and total abundance at a timestamp",
                       epilog=CONVENTIONS, formatter_class=fmt)
    inputs(p)

    p = sub.add_parser("check-growth", help="monetary growth and compensation condition",
                       epilog=CONVENTIONS, formatter_class=fmt)
    inputs(p)
    p.add_argument("--h-years", type=float, default=None,
                   help="central-difference step in years (default: each source's window / 20)")

    p = sub.add_parser("simulate", help="run a scenario file and write a report",
                       epilog=CONVENTIONS, formatter_class=fmt)
    p.add_argument("--scenario", required=True, help="scenario JSON")
    p.add_argument("--out", required=True, help="report path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("convert", help="convert an energy quantity between units",
                       epilog=CONVENTIONS, formatter_class=fmt)
    p.add_argument("--value", required=True)
    p.add_argument("--from", dest="from_unit", required=True, help="kWh MWh GWh TWh GWy TWy")
    p.add_argument("--to", dest="to_unit", required=True, help="kWh MWh GWh TWh GWy TWy")
    return parser


def _matrix(args: argparse.Namespace) -> EnergyMatrix:
    specs = load_matrix_config(args.matrix)
    series = load_series(args.series)
    return EnergyMatrix(specs, series)


def _timestamp(text: str) -> int:
    try:
        return parse_timestamp(text)
    except ValueError as exc:
        raise EscError(f"--at: {exc}") from None


def cmd_compute(args: argparse.Namespace) -> int:
    matrix = _matrix(args)
    snapshot = money_supply(matrix, _timestamp(args.at))
    check_snapshot(snapshot)
    sys.stdout.write(dumps_json(snapshot_to_dict(snapshot)))
    return 0


def cmd_check_growth(args: argparse.Namespace) -> int:
    matrix = _matrix(args)
    h = None
    if args.h_years is not None:
        if not args.h_years > 0:
            raise EscError(f"--h-years must be > 0, got {args.h_years!r}")
        h = years_to_seconds(args.h_years)
        if h <= 0:
            raise EscError("--h-years rounds to zero seconds")
    assessment = growth_condition(matrix, _timestamp(args.at), h)
    sys.stdout.write(dumps_json(assessment_to_dict(assessment)))
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    result = simulate(scenario)
    for snap in result.snapshots:
        check_snapshot(snap)
    write_report(result, args.out, args.format)
    print(
        f"evaluations={len(result.snapshots)} skipped={len(result.skipped)} "
        f"violations={len(result.violations)}",
        file=sys.stderr,
    )
    return 0


def cmd_convert(args: argparse.Namespace) -> int:
    q = EnergyQuantity(parse_number(args.value), parse_unit(args.from_unit))
    print(format_quantity(convert(q, parse_unit(args.to_unit))))
    return 0


COMMANDS = {
    "compute": cmd_compute,
    "check-growth": cmd_check_growth,
    "simulate": cmd_simulate,
    "convert": cmd_convert,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except EscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
