"""`plt`: partial Legendre transform audit on a grid fixture."""

import argparse
from pathlib import Path

from commands import orchestrator_from
from common.errors import EXIT_OK
from legendre.audit import Fixture


def run(args: argparse.Namespace) -> int:
    report = orchestrator_from(args).run_plt(Fixture(args.fixture), args.grid, args.parameter)
    text = report.model_dump_json(indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("plt", help="Residual report of the partial Legendre transform on a fixture")
    parser.add_argument("fixture", choices=[f.value for f in Fixture])
    parser.add_argument("--grid", type=int, default=41, help="Odd grid size per axis")
    parser.add_argument("--parameter", type=float, default=None, help="eps, shear K or perturbation size")
    parser.add_argument("--out", default=None, help="Also write the report to this file")
    parser.set_defaults(handler=run)
