import json

import numpy as np
import pytest

from common.errors import DomainValidationError, SolverError
from geometry.domain import HoledDomain
from geometry.shapes import DiskShape, PolygonShape
from legendre.audit import Fixture
from models.experiment import AnalysisSettings, ExperimentConfig, OracleConfig, load_experiment
from pipeline.acceptance import run_checks, verify_run
from pipeline.artifacts import load_manifest
from pipeline.orchestrator import ExperimentOrchestrator, boundary_points, model_oracle


@pytest.fixture
def tiny_square(fixtures_dir):
    return load_experiment(fixtures_dir / "tiny_square.json")


def artifact_bytes(run_dir) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(run_dir.iterdir()) if p.name != "run.log"}


# --- Oracle detection tests ---


def test_model_oracle_for_centered_annulus(annulus):
    oracle = model_oracle(annulus, DiskShape(radius=float(np.sqrt(1.0 / np.pi))))
    assert oracle is not None
    assert oracle.r == pytest.approx(0.3)


def test_no_model_oracle_otherwise(annulus, square):
    assert model_oracle(square, DiskShape(radius=0.5)) is None
    assert model_oracle(annulus, DiskShape(center=(0.1, 0.0), radius=0.5)) is None


def test_boundary_points_lie_on_the_holes(annulus, square):
    points = boundary_points(annulus, 4)
    assert points.shape == (4, 2)
    np.testing.assert_allclose(np.hypot(points[:, 0], points[:, 1]), 0.3)
    assert boundary_points(square, 4).shape == (0, 2)


# --- Solve tests ---


def test_solve_writes_a_verifiable_run(tmp_path, tiny_square):
    result = ExperimentOrchestrator(runs_dir=tmp_path, threads=1).run_solve(tiny_square)
    run_dir = tmp_path / result.config_hash[:12]
    assert result.artifacts == ["config.json", "diagram.json", "diagram.svg", "potential.json", "solve_report.json"]
    assert (run_dir / "run.log").exists()

    report = json.loads((run_dir / "solve_report.json").read_text())
    assert report["converged"] and report["max_area_residual"] < 1e-8
    assert report["oracle_gradient_error"] is None
    assert [r.name for r in verify_run(run_dir)] == ["solve_residual"]


def test_solve_is_byte_identical_across_threads(tmp_path, tiny_square):
    first = ExperimentOrchestrator(runs_dir=tmp_path / "a", threads=1).run_solve(tiny_square)
    second = ExperimentOrchestrator(runs_dir=tmp_path / "b", threads=4).run_solve(tiny_square)
    assert first.config_hash == second.config_hash
    assert artifact_bytes(tmp_path / "a" / first.config_hash[:12]) == artifact_bytes(
        tmp_path / "b" / second.config_hash[:12]
    )


def test_solver_failure_keeps_the_partial_report(tmp_path, tiny_square):
    cfg = tiny_square.with_overrides(max_iter=1, tol=1e-14)
    with pytest.raises(SolverError):
        ExperimentOrchestrator(runs_dir=tmp_path).run_solve(cfg)
    run_dir = tmp_path / cfg.config_hash()[:12]
    report = json.loads((run_dir / "solve_report.json").read_text())
    assert not report["converged"]
    assert report["message"]
    assert load_manifest(run_dir).files.keys() == {"config.json", "solve_report.json"}


def test_domain_file_is_inlined_before_hashing(tmp_path, tiny_square, fixtures_dir):
    cfg = tiny_square.model_copy(update={"domain": fixtures_dir / "small_hole_domain.json"})
    result = ExperimentOrchestrator(runs_dir=tmp_path).run_solve(cfg.with_overrides(n_seeds=16, tol=1e-6))
    saved = json.loads((tmp_path / result.config_hash[:12] / "config.json").read_text())
    assert isinstance(saved["domain"], dict)
    assert len(saved["domain"]["holes"]) == 1


# --- Report and transform tests ---


def test_report_on_a_square_run(tmp_path, tiny_square):
    orchestrator = ExperimentOrchestrator(runs_dir=tmp_path)
    result = orchestrator.run_solve(tiny_square.with_overrides(grid_level=0))
    report = orchestrator.run_report(tmp_path / result.config_hash[:12])
    assert report.kind == "discrete"
    assert report.n_samples > 0
    assert "report.json" in load_manifest(tmp_path / result.config_hash[:12]).files


def test_plt_on_the_quadratic_fixture():
    report = ExperimentOrchestrator(threads=2).run_plt(Fixture.QUADRATIC, 21)
    assert report.errors == []
    assert report.transform_error < 1e-10


@pytest.mark.slow
def test_oracle_run_passes_verification(tmp_path):
    cfg = OracleConfig(oracle_radius=0.3, analysis=AnalysisSettings(n_points=3, n_angles=2))
    result = ExperimentOrchestrator(runs_dir=tmp_path, threads=4).run_oracle(cfg, sections=False)
    run_dir = tmp_path / result.config_hash[:12]
    report = json.loads((run_dir / "report.json").read_text())
    assert set(report["exact_norms"]) == {"1.5", "1.9"}
    names = [r.name for r in verify_run(run_dir)]
    assert "blowup_slope" in names and "holder_half" in names


@pytest.mark.slow
def test_annulus_solve_reports_gradient_error(tmp_path):
    dom = HoledDomain.annulus(0.3)
    cfg = ExperimentConfig.model_validate(
        {
            "domain": dom.to_spec().model_dump(mode="json"),
            "target": {"type": "disk", "radius": float(np.sqrt(1.0 / np.pi))},
            "solver": {"n_seeds": 400, "tol": 1e-8},
        }
    )
    result = ExperimentOrchestrator(runs_dir=tmp_path).run_solve(cfg)
    report = json.loads((tmp_path / result.config_hash[:12] / "solve_report.json").read_text())
    assert report["converged"]
    assert 0 < report["oracle_gradient_error"] < 0.1


@pytest.mark.slow
def test_small_hole_cascades_pass_through_interior_like(tmp_path, configs_dir):
    cfg = load_experiment(configs_dir / "small_hole.json").with_overrides(n_seeds=1000)
    orchestrator = ExperimentOrchestrator(runs_dir=tmp_path, threads=4)
    result = orchestrator.run_solve(cfg)
    orchestrator.run_analyze(cfg)
    run_dir = tmp_path / result.config_hash[:12]
    traces = json.loads((run_dir / "cascade.json").read_text())["traces"]
    assert any(step["case"] == "InteriorLike" for t in traces for step in t["steps"])
    checks = {r.name: r for r in run_checks(run_dir)}
    assert checks["interior_eccentricity"].passed, checks["interior_eccentricity"].detail
    assert "engulfing_sweep" in checks and "height_comparability" in checks


@pytest.mark.slow
def test_solved_annulus_blowup_slope(tmp_path, configs_dir):
    cfg = load_experiment(configs_dir / "annulus.json")
    orchestrator = ExperimentOrchestrator(runs_dir=tmp_path, threads=4)
    result = orchestrator.run_solve(cfg)
    report = orchestrator.run_report(tmp_path / result.config_hash[:12])
    assert report.fit is not None
    assert -0.65 <= report.fit.slope <= -0.35


def test_target_beyond_the_delta_disk_stops_the_solve(tmp_path, tiny_square):
    wide = tiny_square.model_copy(update={"target": PolygonShape(vertices=[(1.5, 1.5), (2.5, 1.5), (2.5, 2.5), (1.5, 2.5)])})
    with pytest.raises(DomainValidationError):
        ExperimentOrchestrator(runs_dir=tmp_path).run_solve(wide)
