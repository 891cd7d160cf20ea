"""
Integral norms of the Hessian proxy.

Sums are compensated (math.fsum) and taken in sample order, so the result
does not depend on how the samples were produced in parallel.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from common.config import config
from common.errors import InvalidParameterError
from common.logging import get_logger
from estimates.schemas import FieldSample, NormReport, sample_arrays

logger = get_logger(__name__)


def w2p_estimate(samples: list[FieldSample], p: float, levels: int | None = None) -> NormReport:
    """Σ proxy^p·weight with the refinement series over ring depths.

    Level ℓ of `levels` keeps the bulk and all rings up to top − (levels − 1 − ℓ),
    where top is the deepest ring present.
    """
    if p < 0:
        raise InvalidParameterError(f"Exponent must be non-negative, got {p}")
    cols = sample_arrays(samples)
    contrib = cols["proxy"] ** p * cols["weight"]
    ring = cols["ring"]

    top = int(ring.max(initial=-1))
    n_levels = min(levels or config.ring_levels + 1, top + 1) if top >= 0 else 1
    series = []
    for level in range(n_levels):
        depth = top - (n_levels - 1 - level)
        series.append(math.fsum(contrib[(ring < 0) | (ring <= depth)].tolist()))

    value = math.fsum(contrib.tolist())
    logger.debug(f"[Norms] p={p:g} value={value:.6g} series={[round(s, 6) for s in series]}")
    return NormReport(p=p, value=value, refinement_series=series)


def oracle_w2p(r: float, big_r: float, p: float, s_min: float = 0.0) -> float:
    """2π∫ ρ·(ρ/√(ρ²−r²))^p dρ over r + s_min < ρ < R, in the variable t = √(ρ²−r²).

    Diverges for p ≥ 2 unless s_min > 0.
    """
    if not 0 < r < big_r:
        raise InvalidParameterError(f"Need 0 < r < R, got r={r}, R={big_r}")
    if p >= 2 and s_min <= 0:
        raise InvalidParameterError(f"The model Hessian is not in L^{p}: pass a positive s_min")
    t_lo = math.sqrt(max((r + s_min) ** 2 - r * r, 0.0))
    t_hi = math.sqrt(big_r * big_r - r * r)

    def f(t: float) -> float:
        return (r * r + t * t) ** (0.5 * p)

    if t_lo == 0.0:
        # ρ dρ = t dt turns the integrand into t^(1−p)·(r² + t²)^(p/2)
        value, _ = quad(f, 0.0, t_hi, weight="alg", wvar=(1.0 - p, 0.0))
    else:
        value, _ = quad(lambda t: t ** (1.0 - p) * f(t), t_lo, t_hi, limit=200)
    return float(2.0 * np.pi * value)
