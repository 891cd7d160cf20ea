"""`verify`: manifest hashes and acceptance checks of a run directory."""

import argparse

from common.errors import EXIT_OK
from pipeline.acceptance import verify_run


def run(args: argparse.Namespace) -> int:
    results = verify_run(args.run_dir)
    for r in results:
        print(f"PASS  {r.name:<28} {r.detail}")
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Check a run directory (exit 4 on any failure)")
    parser.add_argument("run_dir", help="Run directory containing manifest.json")
    parser.set_defaults(handler=run)
