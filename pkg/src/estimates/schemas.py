from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field


@dataclass(frozen=True)
class FieldSample:
    point: tuple[float, float]
    d: float  # distance to ∂Ω₁
    hessian_proxy: float
    weight: float  # quadrature area
    ring: int = -1  # dyadic ring index around the holes, −1 for the bulk grid


def sample_arrays(samples: list[FieldSample]) -> dict[str, np.ndarray]:
    """Column arrays in sample order."""
    return {
        "point": np.array([s.point for s in samples], dtype=float).reshape(-1, 2),
        "d": np.array([s.d for s in samples], dtype=float),
        "proxy": np.array([s.hessian_proxy for s in samples], dtype=float),
        "weight": np.array([s.weight for s in samples], dtype=float),
        "ring": np.array([s.ring for s in samples], dtype=int),
    }


class NormReport(BaseModel):
    p: float = Field(..., description="Integrability exponent")
    value: float = Field(..., description="Σ proxy^p · weight over all samples")
    refinement_series: list[float] = Field(default_factory=list, description="Partial sums at successive ring depths")

    @property
    def increments(self) -> list[float]:
        s = self.refinement_series
        return [b - a for a, b in zip(s, s[1:], strict=False)]

    @property
    def last_relative_change(self) -> float:
        s = self.refinement_series
        if len(s) < 2:
            return float("nan")
        return (s[-1] - s[-2]) / s[-1]


class BlowupFit(BaseModel):
    slope: float = Field(..., description="Slope of log(proxy) against log(d) on the upper envelope")
    intercept: float
    ci: tuple[float, float] = Field(..., description="95% confidence interval of the slope")
    stderr: float
    n_samples: int = Field(..., description="Samples inside the distance band")
    n_bins: int = Field(..., description="Non-empty envelope bins used in the regression")
    d_band: tuple[float, float]


class HolderReport(BaseModel):
    n_pairs: list[int] = Field(..., description="Pair counts, each a refinement of the previous")
    half: list[float] = Field(..., description="C^{1,1/2} seminorm per pair count")
    stress_alpha: float = 0.75
    stress: list[float] = Field(..., description="Seminorm at the stress exponent per pair count")

    @property
    def half_drift(self) -> float:
        """Largest relative change of the 1/2 seminorm between consecutive refinements."""
        h = self.half
        return max((abs(b - a) / a for a, b in zip(h, h[1:], strict=False)), default=0.0)

    @property
    def stress_growth(self) -> float:
        """Smallest growth factor of the stress seminorm between consecutive refinements."""
        s = self.stress
        return min((b / a for a, b in zip(s, s[1:], strict=False)), default=float("nan"))
