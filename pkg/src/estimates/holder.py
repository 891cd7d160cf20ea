"""Hölder seminorms of ∇u over sampled point pairs."""

from __future__ import annotations

import numpy as np

from common.errors import InvalidParameterError
from common.logging import get_logger
from estimates.schemas import HolderReport
from geometry.domain import HoledDomain, point_in_domain, segment_domain_clip
from potential.base import ConvexPotential

logger = get_logger(__name__)

_T_MIN_EXPONENT = -2.5


def _uniform_points(dom: HoledDomain, n: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = dom.outer.bbox
    out: list[np.ndarray] = []
    count = 0
    while count < n:
        batch = rng.uniform(lo, hi, size=(2 * (n - count) + 16, 2))
        batch = batch[point_in_domain(dom, batch)]
        out.append(batch)
        count += len(batch)
    return np.concatenate(out)[:n]


def _chord_inside(dom: HoledDomain, p: np.ndarray, q: np.ndarray) -> bool:
    cut = segment_domain_clip(dom, p, q)
    return len(cut) == 1 and cut[0][0] <= 1e-12 and cut[0][1] >= 1.0 - 1e-12


def boundary_pairs(dom: HoledDomain, n: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """n point pairs: random chords inside Ω₁ and chords leaving a hole boundary point.

    Boundary chords run along random inward directions with lengths on a
    geometric grid from dom.diameter·n^(−5/2) to δ/2.
    """
    if n < 2:
        raise InvalidParameterError(f"Need at least two pairs, got {n}")
    rng = np.random.default_rng(seed)
    n_anchor = n // 2 if dom.holes else 0
    n_chord = n - n_anchor

    starts, ends = [], []
    while len(starts) < n_chord:
        p, q = _uniform_points(dom, 2, rng)
        if _chord_inside(dom, p, q):
            starts.append(p)
            ends.append(q)

    if n_anchor:
        lengths = np.geomspace(dom.diameter * n**_T_MIN_EXPONENT, 0.5 * dom.delta, n_anchor)
        hole = rng.integers(len(dom.holes), size=n_anchor)
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n_anchor)
        tilt = rng.uniform(-0.5 * np.pi, 0.5 * np.pi, size=n_anchor)
        for k in range(n_anchor):
            y, normal, _, _ = dom.holes[hole[k]].shape.boundary_frame(np.array([theta[k]]))
            y, normal = y.reshape(2), normal.reshape(2)
            c, s = np.cos(tilt[k]), np.sin(tilt[k])
            direction = np.array([c * normal[0] - s * normal[1], s * normal[0] + c * normal[1]])
            starts.append(y)
            ends.append(y + lengths[k] * direction)

    logger.debug(f"[Holder] {n_chord} interior chords, {n_anchor} boundary chords (seed={seed})")
    return np.array(starts), np.array(ends)


def holder_seminorm(u: ConvexPotential, pairs: tuple[np.ndarray, np.ndarray], alpha: float = 0.5) -> float:
    """max |∇u(p) − ∇u(q)| / |p − q|^α."""
    if not 0 < alpha <= 1:
        raise InvalidParameterError(f"Hölder exponent must lie in (0, 1], got {alpha}")
    p, q = (np.atleast_2d(np.asarray(a, dtype=float)) for a in pairs)
    gap = np.linalg.norm(p - q, axis=1)
    keep = gap > 0
    diff = np.linalg.norm(u.subgradients(p[keep]) - u.subgradients(q[keep]), axis=1)
    return float((diff / gap[keep] ** alpha).max())


def holder_half_seminorm(u: ConvexPotential, pairs: tuple[np.ndarray, np.ndarray]) -> float:
    return holder_seminorm(u, pairs, 0.5)


def holder_sweep(
    u: ConvexPotential,
    dom: HoledDomain,
    n_pairs: list[int],
    seed: int = 0,
    stress_alpha: float = 0.75,
) -> HolderReport:
    """Both seminorms over successively larger pair sets (same seed per set)."""
    half, stress = [], []
    for n in n_pairs:
        pairs = boundary_pairs(dom, n, seed)
        half.append(holder_half_seminorm(u, pairs))
        stress.append(holder_seminorm(u, pairs, stress_alpha))
        logger.info(f"[Holder] n={n} half={half[-1]:.5g} alpha={stress_alpha:g}: {stress[-1]:.5g}")
    return HolderReport(n_pairs=list(n_pairs), half=half, stress_alpha=stress_alpha, stress=stress)
