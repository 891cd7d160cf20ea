"""`analyze`: per-point sections, cascades and section laws of a solved potential."""

import argparse

from commands import add_config_argument, experiment_from, orchestrator_from
from common.errors import EXIT_OK


def run(args: argparse.Namespace) -> int:
    result = orchestrator_from(args).run_analyze(experiment_from(args), potential_path=args.potential)
    print(result.run_dir)
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("analyze", help="Section analysis of a solved potential")
    add_config_argument(parser)
    parser.add_argument(
        "--potential",
        default=None,
        help="potential.json to analyze (default: the one in the config's run directory)",
    )
    parser.set_defaults(handler=run)
