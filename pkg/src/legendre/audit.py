"""Fixture audits of the partial Legendre transform: exactness, residual contraction, mixed ratios."""

from __future__ import annotations

from enum import Enum

import numpy as np
from pydantic import BaseModel, Field

from common.errors import InvalidParameterError, LabError
from common.logging import get_logger
from legendre.fixtures import half_plane_solution, half_plane_transform, perturbed_fixture, quadratic_fixture, sheared_fixture
from legendre.grid import GridFunction, PLTFunction
from legendre.residuals import PLTResiduals, mixed_ratio, plt_residuals
from legendre.transform import plt

logger = get_logger(__name__)


class Fixture(str, Enum):
    QUADRATIC = "quadratic"
    HALF_PLANE = "half-plane"
    SHEARED = "sheared"
    PERTURBED = "perturbed"


class PLTReport(BaseModel):
    fixture: Fixture
    n: int
    parameter: float | None = Field(None, description="eps, shear or perturbation size")
    transform_error: float | None = Field(None, description="sup |w* − exact| on the p-grid")
    residuals: PLTResiduals | None = None
    refined_residuals: PLTResiduals | None = Field(None, description="Residuals after halving the grid spacing")
    contraction: float | None = Field(None, description="Smallest residual ratio coarse/fine over the non-vanishing residuals")
    mixed_ratio: float | None = Field(None, description="sup |w12| / w11 over the interior")
    errors: list[str] = Field(default_factory=list)


def build_fixture(fixture: Fixture, n: int, parameter: float | None = None) -> GridFunction:
    if n < 7 or n % 2 == 0:
        raise InvalidParameterError(f"Fixture grids need an odd size ≥ 7, got {n}")
    match fixture:
        case Fixture.QUADRATIC:
            return quadratic_fixture(1.0 if parameter is None else parameter, n=n)
        case Fixture.HALF_PLANE:
            return half_plane_solution(0.1 if parameter is None else parameter, n=n)
        case Fixture.SHEARED:
            return sheared_fixture(1.0 if parameter is None else parameter, n=n)
        case Fixture.PERTURBED:
            return perturbed_fixture(0.5 if parameter is None else parameter, n=n)


def exact_transform(fixture: Fixture, wstar: PLTFunction, parameter: float | None = None) -> np.ndarray | None:
    P, X2 = np.meshgrid(wstar.p, wstar.x2)
    match fixture:
        case Fixture.QUADRATIC:
            a = 1.0 if parameter is None else parameter
            return P**2 / (2.0 * a) - X2**2 / (2.0 * a)
        case Fixture.HALF_PLANE:
            return half_plane_transform(P, X2, 0.1 if parameter is None else parameter)
    return None


def _contraction(coarse: PLTResiduals, fine: PLTResiduals, floor: float = 1e-9) -> float | None:
    ratios = [
        getattr(coarse, k) / getattr(fine, k)
        for k in ("upper_laplacian", "flux_jump")
        if getattr(coarse, k) > floor and getattr(fine, k) > 0
    ]
    return min(ratios) if ratios else None


def plt_audit(fixture: Fixture, n: int = 41, parameter: float | None = None, threads: int | None = 1) -> PLTReport:
    """Transform the fixture on an n-grid and on the halved grid; collect what applies to it."""
    fixture = Fixture(fixture)
    w = build_fixture(fixture, n, parameter)
    report = PLTReport(fixture=fixture, n=n, parameter=parameter)

    stage = "transform"
    try:
        wstar = plt(w, threads=threads)
        exact = exact_transform(fixture, wstar, parameter)
        if exact is not None:
            report.transform_error = float(np.abs(wstar.values - exact).max())
        stage = "residuals"
        report.residuals = plt_residuals(wstar)
        stage = "refined_residuals"
        report.refined_residuals = plt_residuals(plt(build_fixture(fixture, 2 * n - 1, parameter), threads=threads))
        report.contraction = _contraction(report.residuals, report.refined_residuals)
    except LabError as e:
        report.errors.append(f"{stage}: {type(e).__name__}: {e}")

    try:
        report.mixed_ratio = mixed_ratio(w)
    except LabError as e:
        report.errors.append(f"mixed_ratio: {type(e).__name__}: {e}")

    logger.info(
        f"[PLT] {fixture.value} n={n}: transform error {report.transform_error}, "
        f"contraction {report.contraction}, mixed ratio {report.mixed_ratio}"
    )
    return report
