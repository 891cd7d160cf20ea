"""`oracle`: norms, blow-up fit, Hölder sweep and sections of the radial model potential."""

import argparse
import json
from pathlib import Path

from pydantic import ValidationError

from commands import orchestrator_from
from common.errors import EXIT_OK, ConfigSchemaError
from models.experiment import OracleConfig


def _oracle_config(args: argparse.Namespace) -> OracleConfig:
    data: dict = {"oracle_radius": args.r}
    if args.analysis:
        data["analysis"] = json.loads(Path(args.analysis).read_text())
    if args.grid_level is not None:
        data.setdefault("analysis", {})["grid_level"] = args.grid_level
    try:
        return OracleConfig.model_validate(data)
    except ValidationError as e:
        paths = [".".join(str(p) for p in err["loc"]) for err in e.errors()]
        raise ConfigSchemaError(f"Invalid oracle settings at {', '.join(paths)}", field_paths=paths) from e


def run(args: argparse.Namespace) -> int:
    result = orchestrator_from(args).run_oracle(_oracle_config(args), sections=not args.skip_sections)
    print(result.run_dir)
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("oracle", help="Run the estimates on the analytic annulus model")
    parser.add_argument("--r", type=float, default=0.3, help="Hole radius of the model annulus")
    parser.add_argument("--analysis", default=None, help="JSON file with analysis settings")
    parser.add_argument("--grid-level", type=int, default=None, help="Override analysis.grid_level")
    parser.add_argument("--skip-sections", action="store_true", help="Only the field report")
    parser.set_defaults(handler=run)
