"""
Hessian field sampling on Ω₁.

Around each hole a tube of width d_tube = δ/2 is integrated in normal
coordinates x = y(θ) + s·n(θ), area element (1 + s·κ(θ))·|y'(θ)| ds dθ,
with dyadic rings s ∈ [d_tube·2^(−k−1), d_tube·2^(−k)], Gauss–Legendre
nodes per ring and the periodic trapezoid rule in θ. The rest of Ω₁ is
covered by a uniform grid whose cells are clipped against Ω₀ and the tubes.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

from common.config import config
from common.logging import get_logger
from common.parallel import ordered_map
from estimates.schemas import FieldSample
from geometry.domain import ConvexHole, HoledDomain, distance_field, point_in_domain
from geometry.polygon import ConvexPolygon, contains_points, intersection_area, polygon_intersection
from potential.base import AnalyticPotential, ConvexPotential
from potential.discrete import DiscretePotential
from sections.maximal import hessian_proxy

logger = get_logger(__name__)

_DISCRETE_BULK_FACTOR = 4


def tube_width(dom: HoledDomain) -> float:
    return 0.5 * dom.delta


def ring_count(u: ConvexPotential, dom: HoledDomain, grid_level: int | None = None) -> int:
    """Number of dyadic rings: ring_base + grid_level + 1 for analytic potentials,
    down to 10·(mean seed spacing)² for discrete ones."""
    level = config.ring_levels if grid_level is None else grid_level
    if isinstance(u, DiscretePotential):
        floor = 10.0 / len(u)  # |Ω₁| = 1, spacing² = 1/N
        return max(1, int(np.floor(np.log2(tube_width(dom) / floor))))
    return config.ring_base + level + 1


def tube_nodes(hole: ConvexHole, width: float, rings: int, angular: int, gauss: int) -> tuple[np.ndarray, ...]:
    """(points, s, weights, ring index) of the tube quadrature around one hole."""
    theta = 2.0 * np.pi * np.arange(angular) / angular
    y, n, speed, kappa = hole.shape.boundary_frame(theta)
    if gauss > 1:
        nodes, w = leggauss(gauss)
    else:
        nodes, w = np.zeros(1), np.full(1, 2.0)

    k = np.arange(rings)
    hi = width * 2.0**-k
    lo = 0.5 * hi
    s = 0.5 * (lo + hi)[:, None] + 0.5 * (hi - lo)[:, None] * nodes[None, :]  # (rings, gauss)
    ws = 0.5 * (hi - lo)[:, None] * w[None, :]

    s_all = s.ravel()
    ring = np.repeat(k, len(nodes))
    points = y[None, :, :] + s_all[:, None, None] * n[None, :, :]  # (rings·gauss, angular, 2)
    weights = ws.ravel()[:, None] * (1.0 + s_all[:, None] * kappa[None, :]) * speed[None, :] * (2.0 * np.pi / angular)
    return (
        points.reshape(-1, 2),
        np.repeat(s_all, angular),
        weights.ravel(),
        np.repeat(ring, angular),
    )


def tube_polygon(hole: ConvexHole, width: float, resolution: int | None = None) -> ConvexPolygon:
    n = resolution or config.polygon_resolution
    theta = 2.0 * np.pi * np.arange(n) / n
    y, normal, _, _ = hole.shape.boundary_frame(theta)
    return ConvexPolygon(y + width * normal)


def _bulk_point(dom: HoledDomain, clipped: ConvexPolygon, tubes: list[ConvexPolygon]) -> np.ndarray | None:
    """The cell barycenter, or a point of the cell outside every tube when the barycenter leaves Ω₁."""
    center = clipped.barycenter
    if point_in_domain(dom, center):
        return center
    candidates = clipped.vertices + 1e-3 * (center - clipped.vertices)
    for t in tubes:
        candidates = candidates[~contains_points(t, candidates)]
    if not len(candidates):
        return None
    depth = distance_field(dom, candidates)
    return candidates[int(np.argmax(depth))] if depth.max() > 0 else None


def bulk_nodes(dom: HoledDomain, width: float, spacing: float) -> tuple[np.ndarray, np.ndarray]:
    """Cell points and weights |cell ∩ Ω₀| − Σ |cell ∩ tube|."""
    lo, hi = dom.outer.bbox
    xs = np.arange(lo[0], hi[0] + spacing, spacing)
    ys = np.arange(lo[1], hi[1] + spacing, spacing)
    tubes = [tube_polygon(h, width) for h in dom.holes]

    points, weights, lost = [], [], 0.0
    for x0 in xs:
        for y0 in ys:
            cell = ConvexPolygon(np.array([[x0, y0], [x0 + spacing, y0], [x0 + spacing, y0 + spacing], [x0, y0 + spacing]]))
            clipped = polygon_intersection(cell, dom.outer)
            if clipped is None:
                continue
            weight = clipped.area - sum(intersection_area(clipped, t) for t in tubes)
            if weight <= 1e-14 * spacing**2:
                continue
            point = _bulk_point(dom, clipped, tubes)
            if point is None:
                logger.debug(f"[Field] Bulk cell at {clipped.barycenter.tolist()} has no node in Ω₁, dropped")
                lost += weight
                continue
            points.append(point)
            weights.append(weight)

    total = lost + sum(weights)
    if total > 0 and lost > config.bulk_loss_rtol * total:
        logger.warning(f"[Field] Bulk grid dropped {lost / total:.2%} of its mass; refine bulk_spacing")
    return np.array(points).reshape(-1, 2), np.array(weights)


def _discrete_proxy(u: DiscretePotential, dom: HoledDomain, threads: int | None):
    def proxy(x: np.ndarray) -> float:
        try:
            return hessian_proxy(u, dom, x)
        except Exception as e:
            logger.warning(f"[Field] Proxy failed at {x.tolist()}: {type(e).__name__}: {e}")
            return float("nan")

    return lambda pts: np.array(ordered_map(proxy, list(pts), threads=threads))


def hessian_field(
    u: ConvexPotential,
    dom: HoledDomain,
    grid_level: int | None = None,
    threads: int | None = None,
) -> list[FieldSample]:
    """Samples with quadrature weights, graded toward the hole boundaries."""
    discrete = isinstance(u, DiscretePotential)
    width = tube_width(dom)
    rings = ring_count(u, dom, grid_level)
    angular = config.discrete_angular_samples if discrete else config.angular_samples
    gauss = 1 if discrete else config.gauss_nodes
    spacing = config.bulk_spacing * (_DISCRETE_BULK_FACTOR if discrete else 1)

    if discrete:
        evaluate = _discrete_proxy(u, dom, threads)
    elif isinstance(u, AnalyticPotential):
        evaluate = u.hessian_norm
    else:
        raise TypeError(f"No Hessian proxy for {type(u).__name__}")

    samples: list[FieldSample] = []
    for hole in dom.holes:
        pts, s, w, ring = tube_nodes(hole, width, rings, angular, gauss)
        proxy = np.atleast_1d(evaluate(pts))
        samples.extend(
            FieldSample(point=(float(p[0]), float(p[1])), d=float(d), hessian_proxy=float(q), weight=float(wt), ring=int(k))
            for p, d, q, wt, k in zip(pts, s, proxy, w, ring, strict=True)
        )

    pts, w = bulk_nodes(dom, width, spacing)
    if len(pts):
        d = distance_field(dom, pts)
        proxy = np.atleast_1d(evaluate(pts))
        samples.extend(
            FieldSample(point=(float(p[0]), float(p[1])), d=float(dd), hessian_proxy=float(q), weight=float(wt))
            for p, dd, q, wt in zip(pts, d, proxy, w, strict=True)
        )

    dropped = [s for s in samples if not np.isfinite(s.hessian_proxy)]
    if dropped:
        logger.warning(f"[Field] Dropping {len(dropped)} samples without a proxy")
        samples = [s for s in samples if np.isfinite(s.hessian_proxy)]
    logger.info(f"[Field] {len(samples)} samples, {rings} rings per hole, bulk spacing {spacing:g}")
    return samples
