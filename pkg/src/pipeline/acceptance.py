"""
Acceptance checks over a run directory.

Checks run only for the artifacts present and for thresholds that are not
disabled in the run's config. `verify_run` raises VerificationError when the
manifest does not match or any check fails.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from common.errors import VerificationError
from common.logging import get_logger
from models.experiment import AcceptanceSettings, ExperimentConfig, load_run_config
from pipeline.artifacts import manifest_mismatches, read_sections_csv
from pipeline.schemas import ExperimentReport
from sdot.schemas import SolveReport
from sections.schemas import CascadeTrace, EngulfingReport, SectionCase, SectionLaws

logger = get_logger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


def _float(value: str) -> float | None:
    return float(value) if value not in ("", None) else None


# ============================================================================
# Solve
# ============================================================================


def check_solve(report: SolveReport, tol: float, max_iter: int) -> list[CheckResult]:
    ok = report.converged and report.max_area_residual < tol and report.iterations < max_iter
    return [
        CheckResult(
            name="solve_residual",
            passed=ok,
            detail=f"residual {report.max_area_residual:.3e} (tol {tol:g}), {report.iterations} iterations",
        )
    ]


# ============================================================================
# Sections
# ============================================================================


def check_sections(rows: list[dict[str, str]], acc: AcceptanceSettings) -> list[CheckResult]:
    valid = [r for r in rows if not r["error"] and r["case"]]
    if not valid:
        return [CheckResult(name="sections", passed=False, detail=f"no valid rows out of {len(rows)}")]
    results = []

    if acc.model_geometry_fraction is not None:
        model = [r for r in valid if r["case"] == SectionCase.MODEL_GEOMETRY.value]
        share = len(model) / len(valid)
        worst = max((float(r["model_ratio"]) for r in model), default=0.0)
        results.append(
            CheckResult(
                name="model_geometry",
                passed=share >= acc.model_geometry_fraction and worst <= acc.model_ratio_max,
                detail=f"{share:.1%} ModelGeometry, max ratio {worst:.3g}",
            )
        )

    if acc.engulfing_max is not None:
        k = [v for r in rows if (v := _float(r["K_engulf"])) is not None]
        worst = max(k, default=0.0)
        results.append(
            CheckResult(
                name="engulfing", passed=bool(k) and worst <= acc.engulfing_max, detail=f"max K {worst:.3g} over {len(k)}"
            )
        )

    if acc.certified_slack is not None:
        d = np.array([float(r["d"]) for r in valid])
        bound = np.array([float(r["eta"]) for r in valid]) * np.sqrt(d)
        far = d >= np.median(d)
        c_far = float(bound[far].max())
        slack = float(bound.max() / c_far)
        results.append(
            CheckResult(
                name="certified_bound",
                passed=slack <= acc.certified_slack,
                detail=f"η·√d ≤ {slack:.3g}·C with C = {c_far:.4g} fitted on d ≥ {np.median(d):.3g}",
            )
        )
    return results


def check_cascades(traces: list[CascadeTrace], acc: AcceptanceSettings) -> list[CheckResult]:
    if acc.interior_eta_factor is None:
        return []
    ratios = [
        step.eta_ratio
        for trace in traces
        for prev, step in zip(trace.steps, trace.steps[1:], strict=False)
        if prev.case == SectionCase.INTERIOR_LIKE and step.eta_ratio is not None
    ]
    if not ratios:
        return [
            CheckResult(
                name="interior_eccentricity",
                passed=False,
                detail=f"no InteriorLike step is followed by another over {len(traces)} traces",
            )
        ]
    worst = max(ratios)
    return [
        CheckResult(
            name="interior_eccentricity",
            passed=worst <= acc.interior_eta_factor,
            detail=f"max η ratio after InteriorLike {worst:.3g} over {len(ratios)} steps",
        )
    ]


def check_engulfing_sweep(
    reports: list[EngulfingReport], errors: list[str], acc: AcceptanceSettings
) -> list[CheckResult]:
    if acc.engulfing_max is None or not (reports or errors):
        return []
    worst = max((r.K for r in reports), default=math.inf)
    return [
        CheckResult(
            name="engulfing_sweep",
            passed=worst <= acc.engulfing_max,
            detail=f"max K {worst:.3g} over {len(reports)} tangent sections, {len(errors)} heights without one",
        )
    ]


def check_laws(laws: list[SectionLaws], acc: AcceptanceSettings) -> list[CheckResult]:
    if not laws:
        return []
    results = []
    if acc.area_ratio_band is not None:
        lo, hi = acc.area_ratio_band
        ratios = [a for law in laws for a in law.area_ratio]
        in_band = all(lo <= a <= hi for a in ratios)
        monotone = all(law.diameter_monotone for law in laws)
        results.append(
            CheckResult(
                name="section_laws",
                passed=in_band and monotone,
                detail=f"|S_h|/h ∈ [{min(ratios):.3g}, {max(ratios):.3g}], diameters monotone: {monotone}",
            )
        )
    pairs = [(p.short_ratio, p.long_ratio) for law in laws for p in law.comparability]
    if acc.comparability_band is not None and pairs:
        lo, hi = acc.comparability_band
        values = np.array(pairs).ravel()
        results.append(
            CheckResult(
                name="height_comparability",
                passed=bool(np.all((values >= lo) & (values <= hi))),
                detail=f"λ and Λ ratios in [{values.min():.3g}, {values.max():.3g}] over {len(pairs)} height pairs",
            )
        )
    return results


# ============================================================================
# Report
# ============================================================================


def check_report(report: ExperimentReport, acc: AcceptanceSettings) -> list[CheckResult]:
    results = []
    if acc.slope_band is not None:
        lo, hi = acc.slope_band
        slope = report.fit.slope if report.fit else math.nan
        results.append(
            CheckResult(name="blowup_slope", passed=lo <= slope <= hi, detail=f"slope {slope:.4f} in [{lo:g}, {hi:g}]")
        )

    if report.kind == "oracle":
        for norm in report.norms:
            if norm.p < 2:
                change = abs(norm.last_relative_change)
                results.append(
                    CheckResult(
                        name=f"w2p_converges_p{norm.p:g}",
                        passed=change < acc.series_tolerance,
                        detail=f"last relative change {change:.3%}",
                    )
                )
            else:
                inc = np.array(norm.increments)
                spread = float(np.abs(inc / inc.mean() - 1.0).max()) if len(inc) else math.inf
                results.append(
                    CheckResult(
                        name=f"w2p_diverges_p{norm.p:g}",
                        passed=bool(len(inc)) and inc.min() > 0 and spread <= acc.increment_tolerance,
                        detail=f"per-level increments within {spread:.1%} of their mean",
                    )
                )

    if report.holder is not None and acc.holder_drift is not None:
        h = report.holder
        results.append(
            CheckResult(
                name="holder_half",
                passed=h.half_drift < acc.holder_drift,
                detail=f"drift {h.half_drift:.2%} over n = {h.n_pairs}",
            )
        )
        results.append(
            CheckResult(
                name=f"holder_stress_{h.stress_alpha:g}",
                passed=h.stress_growth > acc.holder_growth,
                detail=f"smallest growth per refinement {h.stress_growth:.3g}",
            )
        )
    return results


# ============================================================================
# Run directory
# ============================================================================


def run_checks(run_dir: Path) -> list[CheckResult]:
    cfg = load_run_config(run_dir / "config.json")
    acc = cfg.acceptance
    results: list[CheckResult] = []

    if isinstance(cfg, ExperimentConfig) and (path := run_dir / "solve_report.json").exists():
        report = SolveReport.model_validate_json(path.read_text())
        results += check_solve(report, cfg.solver.tol, cfg.solver.max_iter)
    if (path := run_dir / "sections.csv").exists():
        results += check_sections(read_sections_csv(path), acc)
    if (path := run_dir / "cascade.json").exists():
        data = json.loads(path.read_text())
        results += check_cascades([CascadeTrace.model_validate(t) for t in data["traces"]], acc)
    if (path := run_dir / "engulfing.json").exists():
        data = json.loads(path.read_text())
        reports = [EngulfingReport.model_validate(r) for r in data["reports"]]
        results += check_engulfing_sweep(reports, data["errors"], acc)
    if (path := run_dir / "section_laws.json").exists():
        data = json.loads(path.read_text())
        results += check_laws([SectionLaws.model_validate(s) for s in data["laws"]], acc)
    if (path := run_dir / "report.json").exists():
        results += check_report(ExperimentReport.model_validate_json(path.read_text()), acc)
    return results


def verify_run(run_dir: str | Path) -> list[CheckResult]:
    run_dir = Path(run_dir)
    if not (run_dir / "manifest.json").exists():
        raise VerificationError(f"{run_dir} has no manifest.json")

    problems = manifest_mismatches(run_dir)
    if problems:
        for p in problems:
            logger.error(f"[Verify] {p}")
        raise VerificationError(f"Manifest mismatch in {run_dir}: {'; '.join(problems)}")

    results = run_checks(run_dir)
    for r in results:
        log = logger.info if r.passed else logger.error
        log(f"[Verify] {'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationError(f"{len(failed)}/{len(results)} checks failed: {', '.join(failed)}")
    logger.info(f"[Verify] {len(results)} checks passed for {run_dir}")
    return results
