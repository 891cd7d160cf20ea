"""Target discretization: rejection sampling followed by Lloyd relaxation."""

from __future__ import annotations

import numpy as np

from common.config import config
from common.errors import InvalidParameterError
from common.logging import get_logger
from geometry.polygon import ConvexPolygon, barycenter, contains_points
from sdot.laguerre import power_cells

logger = get_logger(__name__)


def rejection_sample(omega2: ConvexPolygon, n: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = omega2.bbox
    fill = omega2.area / float(np.prod(hi - lo))
    accepted: list[np.ndarray] = []
    count = 0
    while count < n:
        batch = rng.uniform(lo, hi, size=(int((n - count) / fill * 1.2) + 16, 2))
        batch = batch[contains_points(omega2, batch)]
        accepted.append(batch)
        count += len(batch)
    return np.concatenate(accepted)[:n]


def lloyd_step(omega2: ConvexPolygon, seeds: np.ndarray) -> np.ndarray:
    """Move every seed to the barycenter of its Voronoi cell inside Ω₂."""
    psi = 0.5 * np.einsum("ij,ij->i", seeds, seeds)
    cells = power_cells(seeds, psi, omega2)
    return np.array([barycenter(c) if c is not None else s for c, s in zip(cells, seeds, strict=True)])


def sample_target(omega2: ConvexPolygon, n: int, rng_seed: int = 0, lloyd_steps: int | None = None) -> np.ndarray:
    """N equal-mass seeds in Ω₂, deterministic in `rng_seed`."""
    if n < 1:
        raise InvalidParameterError(f"Need at least one seed, got {n}")
    steps = config.lloyd_steps if lloyd_steps is None else lloyd_steps

    rng = np.random.default_rng(rng_seed)
    seeds = rejection_sample(omega2, n, rng)
    for _ in range(steps):
        seeds = lloyd_step(omega2, seeds)
    logger.debug(f"[Sampling] {n} seeds after {steps} Lloyd steps (seed={rng_seed})")
    return seeds
