"""
Centered sections S_h^u(x) = {u < L} with L(x) = u(x) + h and barycenter x.

The slope b of L is found by a damped fixed point
    b ← b + τ·(h/2)·Cov⁻¹·(x − barycenter(S_b)),
which is exact in one step for quadratics. Sublevel sets of discrete
potentials are exact half-plane intersections; analytic potentials are
polygonized by bisection along rays from x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import HalfspaceIntersection, QhullError

from common.config import config
from common.errors import CenteringError, DegenerateGeometryError, InvalidParameterError, UnboundedSectionError
from common.logging import get_logger
from geometry.polygon import ConvexPolygon, contains_points, second_moment
from geometry.rectangle import JohnBox, min_area_rectangle
from potential.base import ConvexPotential
from potential.discrete import DiscretePotential

logger = get_logger(__name__)

_BOX_SCALE = 100.0
_MAX_DOUBLINGS = 60
_BISECTIONS = 48


@dataclass(frozen=True, eq=False)
class Section:
    center: np.ndarray
    height: float
    slope: np.ndarray
    value: float  # L(center) = u(center) + height
    polygon: ConvexPolygon
    box: JohnBox

    def affine(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.value + (pts - self.center) @ self.slope

    @property
    def area(self) -> float:
        return self.polygon.area

    @property
    def diameter(self) -> float:
        return self.polygon.diameter

    @property
    def eccentricity(self) -> float:
        return self.box.eccentricity


# ============================================================================
# Sublevel sets
# ============================================================================


def _discrete_sublevel(u: DiscretePotential, x: np.ndarray, level: float, slope: np.ndarray) -> ConvexPolygon:
    """{p : p·(y_i − b) < ψ_i + level − b·x for all i}, level = u(x) + h."""
    a = u.seeds - slope
    c = u.weights + level - slope @ x
    radius = _BOX_SCALE * (1.0 + float(np.abs(u.seeds).max()) + float(np.abs(x).max()))
    box_a = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    box_c = np.array([x[0] + radius, radius - x[0], x[1] + radius, radius - x[1]])
    halfspaces = np.vstack([np.column_stack([a, -c]), np.column_stack([box_a, -box_c])])
    try:
        hs = HalfspaceIntersection(halfspaces, x)
    except QhullError as e:
        raise DegenerateGeometryError(f"Sublevel half-plane intersection failed: {e}") from e
    pts = hs.intersections
    if np.any(np.abs(np.abs(pts - x).max(axis=1) - radius) <= 1e-9 * radius):
        raise UnboundedSectionError(f"Sublevel set at slope {slope.tolist()} is unbounded")
    return ConvexPolygon.from_points(pts)


def _ray_directions(rays: int, frame: np.ndarray | None = None) -> np.ndarray:
    """Unit directions, uniform in angle or uniform in angle after mapping by `frame`."""
    theta = 2.0 * np.pi * np.arange(rays) / rays
    d = np.column_stack([np.cos(theta), np.sin(theta)])
    if frame is not None:
        d = d @ frame.T
        d /= np.linalg.norm(d, axis=1)[:, None]
    return d


def _sqrt_frame(cov: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(cov)
    w = np.maximum(w, 1e-12 * max(float(w.max()), 1e-300))
    return (v * np.sqrt(w)) @ v.T


def _ray_exits(u: ConvexPotential, x: np.ndarray, level: float, slope: np.ndarray, d: np.ndarray) -> ConvexPolygon:
    """Polygon through the ray exits of {u < L}; f(t) = u(x + t·d) − L is convex with f(0) = −h."""
    rays = len(d)
    bd = d @ slope

    def f(t: np.ndarray) -> np.ndarray:
        return u.values(x + t[:, None] * d) - level - t * bd

    h = level - float(u.values(x[None, :])[0])
    lo = np.zeros(rays)
    hi = np.full(rays, np.sqrt(h))
    open_rays = f(hi) < 0
    for _ in range(_MAX_DOUBLINGS):
        if not open_rays.any():
            break
        lo = np.where(open_rays, hi, lo)
        hi = np.where(open_rays, 2.0 * hi, hi)
        open_rays = f(hi) < 0
    if open_rays.any():
        raise UnboundedSectionError(f"Sublevel set at slope {slope.tolist()} is unbounded along {int(open_rays.sum())} rays")

    for _ in range(_BISECTIONS):
        mid = 0.5 * (lo + hi)
        below = f(mid) < 0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return ConvexPolygon.from_points(x + (0.5 * (lo + hi))[:, None] * d)


def _analytic_sublevel(u: ConvexPotential, x: np.ndarray, level: float, slope: np.ndarray, rays: int) -> ConvexPolygon:
    """Ray polygon of {u < L}, re-shot in the covariance frame of the previous pass until the area settles.

    In that frame an elongated section looks round, so rays spread evenly along its boundary.
    """
    poly = _ray_exits(u, x, level, slope, _ray_directions(rays))
    for _ in range(config.ray_passes):
        refined = _ray_exits(u, x, level, slope, _ray_directions(rays, _sqrt_frame(second_moment(poly))))
        settled = abs(refined.area - poly.area) <= config.ray_area_rtol * refined.area
        poly = refined
        if settled:
            break
    return poly


def sublevel_polygon(u: ConvexPotential, x, h: float, slope, rays: int | None = None) -> ConvexPolygon:
    """Polygon of {u < u(x) + h + slope·(· − x)}."""
    x = np.asarray(x, dtype=float)
    slope = np.asarray(slope, dtype=float)
    level = float(u.values(x[None, :])[0]) + h
    if isinstance(u, DiscretePotential):
        return _discrete_sublevel(u, x, level, slope)
    return _analytic_sublevel(u, x, level, slope, rays or config.ray_count)


# ============================================================================
# Centering
# ============================================================================


def _initial_slope(u: ConvexPotential, x: np.ndarray) -> np.ndarray:
    return np.asarray(u.subgradient(x), dtype=float)


def _interior_slope(u: ConvexPotential, b: np.ndarray) -> np.ndarray | None:
    """A slope strictly inside the gradient image to retreat toward when b leaves it."""
    if isinstance(u, DiscretePotential):
        return u.seeds.mean(axis=0)
    return None


def _bounded_start(u: ConvexPotential, x: np.ndarray, h: float, b: np.ndarray, rays: int | None):
    try:
        return b, sublevel_polygon(u, x, h, b, rays)
    except UnboundedSectionError:
        target = _interior_slope(u, b)
        if target is None:
            raise
    for _ in range(30):
        b = 0.5 * (b + target)
        try:
            return b, sublevel_polygon(u, x, h, b, rays)
        except UnboundedSectionError:
            continue
    raise UnboundedSectionError(f"No bounded sublevel set found at x={x.tolist()}, h={h:g}")


def centered_section(u: ConvexPotential, x, h: float, slope0=None, rays: int | None = None) -> Section:
    """Section of height h whose barycenter is x (within centering_tol·diam)."""
    if not h > 0:
        raise InvalidParameterError(f"Section height must be positive, got {h}")
    x = np.asarray(x, dtype=float)
    b0 = _initial_slope(u, x) if slope0 is None else np.asarray(slope0, dtype=float)
    b, poly = _bounded_start(u, x, h, b0, rays)

    err = x - poly.barycenter
    best = (float(np.linalg.norm(err)), b, poly)
    tau = 1.0
    for it in range(config.centering_max_iter):
        if best[0] <= config.centering_tol * best[2].diameter:
            b, poly = best[1], best[2]
            logger.debug(f"[Sections] Centered x={x.tolist()} h={h:.3e} in {it} iterations")
            return _section(u, x, h, b, poly)

        b, poly = best[1], best[2]
        cov = second_moment(poly)
        step = 0.5 * h * np.linalg.solve(cov, x - poly.barycenter)
        try:
            trial_b = b + tau * step
            trial = sublevel_polygon(u, x, h, trial_b, rays)
            trial_err = float(np.linalg.norm(x - trial.barycenter))
        except (UnboundedSectionError, DegenerateGeometryError):
            trial_err = np.inf

        if trial_err < best[0]:
            best = (trial_err, trial_b, trial)
            tau = min(1.0, 2.0 * tau)
        else:
            tau *= 0.5
            if tau < 1e-12:
                break

    raise CenteringError(
        f"Centering at x={x.tolist()}, h={h:.3e} stalled with residual {best[0]:.3e}",
        best=best[1],
        residual=best[0],
    )


def _section(u: ConvexPotential, x: np.ndarray, h: float, b: np.ndarray, poly: ConvexPolygon) -> Section:
    value = float(u.values(x[None, :])[0]) + h
    return Section(center=x, height=h, slope=b, value=value, polygon=poly, box=min_area_rectangle(poly))


def section_contains(sec: Section, points, tol: float = 0.0) -> np.ndarray:
    return contains_points(sec.polygon, points, tol)


def uncentered_section(u: ConvexPotential, x, h: float, slope, rays: int | None = None) -> Section:
    """Section at a given slope, retreating into the gradient image when that slope is unbounded."""
    x = np.asarray(x, dtype=float)
    b, poly = _bounded_start(u, x, h, np.asarray(slope, dtype=float), rays)
    return _section(u, x, h, b, poly)
