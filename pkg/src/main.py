import argparse
import sys

from commands import analyze, oracle, plt, report, solve, verify
from common.config import config
from common.errors import EXIT_FAILURE, LabError
from common.logging import configure_logging, get_logger

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holed-ot",
        description="Regularity laboratory for optimal transport out of domains with holes",
    )
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (0 = logical cores)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--runs-dir", default=None, help=f"Run directory root (default {config.runs_dir})")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (solve, analyze, oracle, verify, plt, report):
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        config.log_level = args.log_level.upper()
    configure_logging(config.log_level)

    try:
        return args.handler(args)
    except LabError as e:
        logger.error(f"[{args.command}] {type(e).__name__}: {e}")
        return e.exit_code
    except (OSError, ValueError) as e:
        logger.error(f"[{args.command}] {type(e).__name__}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
