"""`solve`: semi-discrete transport from the config's domain onto its sampled target."""

import argparse

from commands import add_config_argument, experiment_from, orchestrator_from
from common.errors import EXIT_OK
from common.logging import get_logger

logger = get_logger(__name__)


def run(args: argparse.Namespace) -> int:
    cfg = experiment_from(args)
    result = orchestrator_from(args).run_solve(cfg)
    logger.info(f"[Solve] Artifacts in {result.run_dir}: {', '.join(result.artifacts)}")
    print(result.run_dir)
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="Solve for the discrete Brenier potential")
    add_config_argument(parser)
    parser.set_defaults(handler=run)
