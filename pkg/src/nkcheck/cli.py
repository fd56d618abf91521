"""Command line entry point: ``nkcheck identities|chart <id>|ode|laws|all``."""
from __future__ import annotations

import argparse
import sys
import time

from . import suites
from .catalog import UnknownChart, chart_ids
from .report import ConfigError, IoFailure, emit_report, load_config

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file; flags override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int, help="random samples for algebraic identities")
    common.add_argument("--deriv-samples", type=int, help="random samples for derivative identities")
    common.add_argument("--tol-algebraic", type=float)
    common.add_argument("--tol-derivative", type=float)
    common.add_argument("--chart", action="append", dest="charts",
                        help="restrict 'all' to these chart ids (repeatable)")
    common.add_argument("--grid", type=int, help="grid points per parameter axis")
    common.add_argument("--format", choices=("json", "text"))
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--timing", action="store_true", default=None,
                        help="record wall-clock duration (reports are then no longer byte-stable)")

    parser = argparse.ArgumentParser(prog="nkcheck", description="Verify the nearly Kaehler S^3 x S^3 toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("identities", parents=[common], help="algebraic and derivative identities")
    chart = sub.add_parser("chart", parents=[common], help="frame, angle and coefficient checks on one chart")
    chart.add_argument("chart_id", help="one of: " + ", ".join(chart_ids()))
    sub.add_parser("ode", parents=[common], help="profile ODE checks")
    sub.add_parser("laws", parents=[common], help="transformation laws under F1 and F2")
    sub.add_parser("all", parents=[common], help="every suite and every chart")
    sub.add_parser("charts", help="list chart ids")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "charts":
        print("\n".join(chart_ids()))
        return EXIT_OK

    overrides = {k: getattr(args, k) for k in (
        "seed", "samples", "deriv_samples", "tol_algebraic", "tol_derivative", "grid", "format", "out", "timing")}
    overrides["charts"] = tuple(args.charts) if args.charts else None
    try:
        cfg = load_config(args.config, overrides)
        for cid in cfg.charts:
            if cid not in chart_ids():
                raise UnknownChart(cid)
        start = time.perf_counter()
        if args.command == "identities":
            rep = suites.run_identity_suite(cfg)
        elif args.command == "chart":
            rep = suites.run_chart_suite(cfg, args.chart_id)
        elif args.command == "ode":
            rep = suites.run_ode_suite(cfg)
        elif args.command == "laws":
            rep = suites.run_laws_suite(cfg)
        else:
            rep = suites.run_all(cfg)
        if cfg.timing:
            rep.duration_ms = int(round((time.perf_counter() - start) * 1000))
        emit_report(rep, cfg.format, cfg.out)
    except (ConfigError, UnknownChart) as exc:
        msg = f"unknown chart {exc.args[0]!r}" if isinstance(exc, UnknownChart) else str(exc)
        print(f"nkcheck: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except IoFailure as exc:
        print(f"nkcheck: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
