"""`report`: recompute the field report (norms, fit, plots) of a run directory."""

import argparse

from commands import orchestrator_from
from common.errors import EXIT_OK


def run(args: argparse.Namespace) -> int:
    report = orchestrator_from(args).run_report(args.run_dir)
    slope = f"{report.fit.slope:.4f}" if report.fit else "n/a"
    print(f"{args.run_dir}: {report.n_samples} samples, blow-up slope {slope}")
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="Field report of a solved or oracle run")
    parser.add_argument("run_dir")
    parser.set_defaults(handler=run)
