"""
Experiment orchestrator: solve, analyze, report and oracle runs.

Each run writes into runs_dir/<config hash prefix>/ and refreshes the
manifest after every stage. Stage failures are logged and re-raised; the
artifacts written so far (including a partial solve report) stay on disk.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from common.config import config
from common.errors import CenteringError, LabError, SolverError, handle_stage_errors
from common.logging import configure_logging, get_logger
from estimates.field import bulk_nodes, hessian_field, tube_width
from estimates.fit import blowup_fit, certified_constant
from estimates.holder import holder_sweep
from estimates.norms import oracle_w2p, w2p_estimate
from geometry.domain import HoledDomain
from geometry.shapes import DiskShape, TargetShape
from legendre.audit import Fixture, PLTReport, plt_audit
from models.experiment import AnalysisSettings, ExperimentConfig, OracleConfig, load_run_config
from pipeline.artifacts import load_manifest, run_directory, write_json, write_manifest, write_sections_csv
from pipeline.plots import plot_blowup, plot_diagram, plot_refinement
from pipeline.schemas import ExperimentReport, RunResult
from potential.analytic import ModelPotential
from potential.base import ConvexPotential
from potential.discrete import DiscretePotential, DiscretePotentialRecord
from sdot.sampling import sample_target
from sdot.solver import solve_potential, transport_error
from sections.analyzer import SectionAnalyzer
from sections.cascade import cascade
from sections.engulfing import engulfing_sweep
from sections.properties import section_laws

logger = get_logger(__name__)

_CENTERED = 1e-12


def model_oracle(dom: HoledDomain, target: TargetShape) -> ModelPotential | None:
    """The radial model potential when the run is a centered annulus onto a centered disk."""
    if len(dom.holes) != 1 or not isinstance(dom.outer_shape, DiskShape):
        return None
    hole = dom.holes[0].shape
    if not isinstance(hole, DiskShape) or not isinstance(target, DiskShape):
        return None
    if any(np.hypot(*c) > _CENTERED for c in (dom.outer_shape.center, hole.center, target.center)):
        return None
    return ModelPotential(hole.radius)


def boundary_points(dom: HoledDomain, n_angles: int) -> np.ndarray:
    theta = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    return np.concatenate([h.shape.boundary_frame(theta)[0] for h in dom.holes]) if dom.holes else np.empty((0, 2))


class ExperimentOrchestrator:
    """Runs experiment stages and keeps their run directory consistent."""

    def __init__(self, runs_dir: str | Path | None = None, threads: int | None = None):
        self.runs_dir = Path(runs_dir or config.runs_dir)
        self.threads = threads

    def _prepare(self, cfg: ExperimentConfig | OracleConfig) -> tuple[Path, str]:
        digest = cfg.config_hash()
        run_dir = run_directory(self.runs_dir, digest)
        write_json(run_dir / "config.json", cfg.canonical_dict())
        configure_logging(config.log_level, run_dir)
        logger.info(f"[Run] {run_dir} (config {digest[:12]})")
        return run_dir, digest

    def _finish(self, run_dir: Path, digest: str) -> RunResult:
        manifest = write_manifest(run_dir, digest)
        return RunResult(run_dir=str(run_dir), config_hash=digest, artifacts=sorted(manifest.files))

    # --- Solve ---

    def run_solve(self, cfg: ExperimentConfig) -> RunResult:
        cfg = cfg.inline_domain()
        run_dir, digest = self._prepare(cfg)
        s = cfg.solver

        with handle_stage_errors("Solve"):
            dom = cfg.build_domain()
            target = cfg.target_polygon()
            dom.check_target(target)
            seeds = sample_target(target, s.n_seeds, rng_seed=s.rng_seed, lloyd_steps=s.lloyd_steps)
            try:
                potential, diagram, report = solve_potential(dom, seeds, tol=s.tol, max_iter=s.max_iter)
            except SolverError as e:
                if e.report is not None:
                    write_json(run_dir / "solve_report.json", e.report)
                self._finish(run_dir, digest)
                raise

        oracle = model_oracle(dom, cfg.target)
        if oracle is not None:
            points, _ = bulk_nodes(dom, tube_width(dom), config.bulk_spacing)
            report.oracle_gradient_error = transport_error(potential, oracle, points)
            logger.info(f"[Solve] Mean gradient error against the model: {report.oracle_gradient_error:.4e}")

        write_json(run_dir / "potential.json", potential.to_record())
        write_json(run_dir / "diagram.json", diagram.to_record())
        write_json(run_dir / "solve_report.json", report)
        plot_diagram(diagram, dom, run_dir / "diagram.svg")
        return self._finish(run_dir, digest)

    # --- Sections ---

    def _analyze(self, u: ConvexPotential, dom: HoledDomain, analysis: AnalysisSettings, run_dir: Path) -> None:
        analyzer = SectionAnalyzer(u, dom, analysis.thresholds, threads=self.threads)
        points = analyzer.sample_points(analysis.d_band, analysis.n_points, analysis.n_angles)
        write_sections_csv(run_dir / "sections.csv", analyzer.run(points))

        starts = boundary_points(dom, analysis.n_angles)
        h_stop = min(analysis.heights)
        traces, errors = [], []
        for y in starts:
            try:
                traces.append(cascade(u, dom, y, h_stop, analysis.thresholds))
            except CenteringError as e:
                if e.partial is not None:
                    traces.append(e.partial)
                errors.append(f"cascade {y.tolist()}: {type(e).__name__}: {e}")
            except LabError as e:
                errors.append(f"cascade {y.tolist()}: {type(e).__name__}: {e}")
        for err in errors:
            logger.warning(f"[Cascade] {err}")
        write_json(
            run_dir / "cascade.json",
            {
                "traces": [
                    t.model_dump(mode="json") | {"soundness": t.soundness, "branch_frequency": t.branch_frequency}
                    for t in traces
                ],
                "errors": errors,
            },
        )

        sweep, sweep_errors = [], []
        for y in starts:
            reports, errs = engulfing_sweep(u, dom, y, analysis.engulfing_heights)
            sweep += reports
            sweep_errors += [f"engulfing {y.tolist()} {e}" for e in errs]
        write_json(
            run_dir / "engulfing.json",
            {"reports": [r.model_dump(mode="json") for r in sweep], "errors": sweep_errors},
        )

        laws, law_errors = [], []
        for y in starts:
            try:
                laws.append(section_laws(u, y, analysis.heights))
            except LabError as e:
                law_errors.append(f"laws {y.tolist()}: {type(e).__name__}: {e}")
        write_json(
            run_dir / "section_laws.json",
            {"laws": [law.model_dump(mode="json") for law in laws], "errors": law_errors},
        )

    def run_analyze(self, cfg: ExperimentConfig, potential_path: str | Path | None = None) -> RunResult:
        cfg = cfg.inline_domain()
        run_dir, digest = self._prepare(cfg)
        path = Path(potential_path) if potential_path else run_dir / "potential.json"
        with handle_stage_errors("Analyze"):
            record = DiscretePotentialRecord.model_validate_json(path.read_text())
            u = DiscretePotential.from_record(record)
            if path.resolve() != (run_dir / "potential.json").resolve():
                write_json(run_dir / "potential.json", record)
            self._analyze(u, cfg.build_domain(), cfg.analysis, run_dir)
        return self._finish(run_dir, digest)

    # --- Field report ---

    def _field_report(
        self,
        u: ConvexPotential,
        dom: HoledDomain,
        analysis: AnalysisSettings,
        run_dir: Path,
        oracle: OracleConfig | None = None,
    ) -> ExperimentReport:
        samples = hessian_field(u, dom, analysis.grid_level, threads=self.threads)
        report = ExperimentReport(kind="oracle" if oracle else "discrete", n_samples=len(samples))
        report.norms = [w2p_estimate(samples, p, levels=analysis.grid_level + 1) for p in analysis.p_values]

        try:
            report.fit = blowup_fit(samples, analysis.d_band)
            report.certified_constant = certified_constant(samples, analysis.d_band)
        except LabError as e:
            report.errors.append(f"fit: {type(e).__name__}: {e}")
            logger.warning(f"[Fit] {type(e).__name__}: {e}")

        if oracle is not None and isinstance(u, ModelPotential):
            report.exact_norms = {f"{p:g}": oracle_w2p(u.r, u.R, p) for p in analysis.p_values if p < 2}
            report.holder = holder_sweep(u, dom, oracle.holder_pairs, seed=oracle.rng_seed)

        write_json(run_dir / "report.json", report)
        plot_blowup(samples, report.fit, run_dir / "blowup.svg")
        plot_refinement(report.norms, run_dir / "refinement.svg")
        return report

    def run_oracle(self, cfg: OracleConfig, sections: bool = True) -> RunResult:
        run_dir, digest = self._prepare(cfg)
        with handle_stage_errors("Oracle"):
            dom = HoledDomain.annulus(cfg.oracle_radius)
            u = ModelPotential(dom.holes[0].shape.radius)
            self._field_report(u, dom, cfg.analysis, run_dir, oracle=cfg)
            if sections:
                self._analyze(u, dom, cfg.analysis, run_dir)
        return self._finish(run_dir, digest)

    def run_report(self, run_dir: str | Path) -> ExperimentReport:
        run_dir = Path(run_dir)
        cfg = load_run_config(run_dir / "config.json")
        configure_logging(config.log_level, run_dir)
        with handle_stage_errors("Report"):
            if isinstance(cfg, OracleConfig):
                dom = HoledDomain.annulus(cfg.oracle_radius)
                u: ConvexPotential = ModelPotential(dom.holes[0].shape.radius)
                report = self._field_report(u, dom, cfg.analysis, run_dir, oracle=cfg)
            else:
                u = DiscretePotential.from_record(
                    DiscretePotentialRecord.model_validate_json((run_dir / "potential.json").read_text())
                )
                report = self._field_report(u, cfg.build_domain(), cfg.analysis, run_dir)
        has_manifest = (run_dir / "manifest.json").exists()
        self._finish(run_dir, load_manifest(run_dir).config_hash if has_manifest else cfg.config_hash())
        return report

    # --- Transform audit ---

    def run_plt(self, fixture: Fixture, n: int, parameter: float | None = None) -> PLTReport:
        with handle_stage_errors("PLT"):
            return plt_audit(fixture, n, parameter, threads=self.threads)
