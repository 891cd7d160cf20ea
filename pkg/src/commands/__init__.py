"""CLI subcommands. Each module exposes `register(subparsers)` and sets `handler` on its parser."""

from __future__ import annotations

import argparse

from models.experiment import ExperimentConfig, load_experiment
from pipeline.orchestrator import ExperimentOrchestrator


def add_config_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", help="Experiment JSON file")
    parser.add_argument("--n-seeds", type=int, default=None, help="Override solver.n_seeds")
    parser.add_argument("--tol", type=float, default=None, help="Override solver.tol")
    parser.add_argument("--max-iter", type=int, default=None, help="Override solver.max_iter")
    parser.add_argument("--rng-seed", type=int, default=None, help="Override solver.rng_seed")
    parser.add_argument("--grid-level", type=int, default=None, help="Override analysis.grid_level")


def experiment_from(args: argparse.Namespace) -> ExperimentConfig:
    """Config file with the command-line overrides applied."""
    return load_experiment(args.config).with_overrides(
        n_seeds=args.n_seeds,
        tol=args.tol,
        max_iter=args.max_iter,
        rng_seed=args.rng_seed,
        grid_level=args.grid_level,
    )


def orchestrator_from(args: argparse.Namespace) -> ExperimentOrchestrator:
    return ExperimentOrchestrator(runs_dir=args.runs_dir, threads=args.threads)
