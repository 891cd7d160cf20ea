"""
Source domains Ω₁ = Ω₀ minus convex holes.

Holes keep both their analytic descriptor (distance, tangent, curvature) and
an inscribed polygon (clipping). Construction rescales the configuration so
that the polygonal area of Ω₁ is exactly one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from common.config import config
from common.errors import DomainValidationError, NotOnBoundaryError, OutsideDomainError
from common.logging import get_logger
from geometry.polygon import ConvexPolygon, intersection_area, polygon_distance, segment_clip
from geometry.shapes import DiskShape, DomainSpec, EllipseShape, PolygonShape

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ConvexHole:
    shape: DiskShape | EllipseShape
    polygon: ConvexPolygon

    @classmethod
    def from_shape(cls, shape: DiskShape | EllipseShape, resolution: int | None = None) -> ConvexHole:
        return cls(shape=shape, polygon=shape.polygon(resolution or config.polygon_resolution))

    @property
    def curvature_bounds(self) -> tuple[float, float]:
        return self.shape.curvature_range

    @property
    def area(self) -> float:
        return self.polygon.area

    def boundary_point(self, theta) -> np.ndarray:
        return self.shape.boundary_point(theta)


@dataclass(frozen=True, eq=False)
class HoledDomain:
    outer_shape: DiskShape | PolygonShape
    outer: ConvexPolygon
    holes: tuple[ConvexHole, ...]
    delta: float

    @classmethod
    def build(
        cls,
        outer: DiskShape | PolygonShape,
        holes: list[DiskShape | EllipseShape] | tuple = (),
        delta: float = 0.1,
        normalize: bool = True,
        resolution: int | None = None,
        validate: bool = True,
    ) -> HoledDomain:
        """Polygonize, optionally rescale to unit area (δ ↦ δ·min(s, 1/s)), and validate."""
        n = resolution or config.polygon_resolution
        if normalize:
            area = outer.area - sum(h.area for h in holes)
            if area <= 0:
                raise DomainValidationError(f"Holes cover the outer domain (area {area:.3e})")
            s = 1.0 / np.sqrt(area)
            outer = outer.scaled(s)
            holes = [h.scaled(s) for h in holes]
            delta = delta * min(s, 1.0 / s)
            logger.debug(f"[Domain] Normalized by scale {s:.6f}, delta -> {delta:.6f}")

        dom = cls(
            outer_shape=outer,
            outer=outer.polygon(n),
            holes=tuple(ConvexHole.from_shape(h, n) for h in holes),
            delta=float(delta),
        )
        if validate:
            dom.validate()
        return dom

    @classmethod
    def from_spec(cls, spec: DomainSpec, **kwargs) -> HoledDomain:
        return cls.build(spec.outer, list(spec.holes), spec.delta, **kwargs)

    @classmethod
    def annulus(cls, r: float, delta: float | None = None, **kwargs) -> HoledDomain:
        """Disk of radius R with a centered disk hole of radius r, π(R² − r²) = 1."""
        big = float(np.sqrt(1.0 / np.pi + r * r))
        if delta is None:
            delta = 0.9 * min(r, big - r, 1.0 / big)
        kwargs.setdefault("normalize", False)
        return cls.build(DiskShape(radius=big), [DiskShape(radius=r)], delta, **kwargs)

    def to_spec(self) -> DomainSpec:
        return DomainSpec(outer=self.outer_shape, holes=[h.shape for h in self.holes], delta=self.delta)

    @property
    def area(self) -> float:
        return self.outer_shape.area - sum(h.shape.area for h in self.holes)

    @property
    def polygon_area(self) -> float:
        """Area of the polygonized domain, the total mass seen by clipped cells."""
        return self.outer.area - sum(h.area for h in self.holes)

    @property
    def diameter(self) -> float:
        return self.outer.diameter

    def validate(self) -> None:
        """Check separation, curvature and containment against δ."""
        tol = 1e-9
        d = self.delta
        for i, hole in enumerate(self.holes):
            k_min, k_max = hole.curvature_bounds
            if k_min < d * (1 - tol) or k_max > (1 + tol) / d:
                raise DomainValidationError(
                    f"Hole {i} curvature range [{k_min:.4g}, {k_max:.4g}] outside [δ, 1/δ] with δ = {d:.4g}"
                )
            gap = float(_outer_interior_distance(self, hole.polygon.vertices).min())
            if not np.all(self.outer_shape.contains(hole.polygon.vertices)) or gap < d * (1 - tol):
                raise DomainValidationError(f"Hole {i} is closer than δ = {d:.4g} to the outer boundary ({gap:.4g})")
            for j in range(i):
                sep = polygon_distance(hole.polygon, self.holes[j].polygon)
                if sep < d * (1 - tol):
                    raise DomainValidationError(f"Holes {j} and {i} are {sep:.4g} apart, less than δ = {d:.4g}")
        if self.outer_shape.extent > (1 + tol) / d:
            raise DomainValidationError(f"Outer domain leaves the disk of radius 1/δ = {1 / d:.4g}")

    def check_target(self, target: ConvexPolygon) -> None:
        """The target must lie in the disk of radius 1/δ about the origin."""
        reach = float(np.linalg.norm(target.vertices, axis=1).max())
        if reach > (1 + 1e-9) / self.delta:
            raise DomainValidationError(f"Target reaches {reach:.4g}, outside the disk of radius 1/δ = {1 / self.delta:.4g}")


# ============================================================================
# Loading
# ============================================================================


def load_domain(path: str | Path, **kwargs) -> HoledDomain:
    spec = DomainSpec.model_validate_json(Path(path).read_text())
    return HoledDomain.from_spec(spec, **kwargs)


def dump_domain(dom: HoledDomain, path: str | Path) -> None:
    Path(path).write_text(json.dumps(dom.to_spec().model_dump(mode="json"), indent=2))


# ============================================================================
# Membership and distances
# ============================================================================


def _outer_interior_distance(dom: HoledDomain, points: np.ndarray) -> np.ndarray:
    return dom.outer_shape.interior_distance(points)


def point_in_domain(dom: HoledDomain, points) -> np.ndarray | bool:
    """Analytic membership in Ω₁ (inside Ω₀ and outside every hole)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    inside = dom.outer_shape.contains(pts).copy()
    for hole in dom.holes:
        inside &= ~hole.shape.contains(pts)
    return bool(inside[0]) if single else inside


def distance_field(dom: HoledDomain, points) -> np.ndarray:
    """dist(x, Ω₁ᶜ) for each point; zero outside Ω₁."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = _outer_interior_distance(dom, pts)
    for hole in dom.holes:
        d = np.minimum(d, hole.shape.exterior_distance(pts))
    return np.where(point_in_domain(dom, pts), d, 0.0)


def hole_distances(dom: HoledDomain, points) -> np.ndarray:
    """Distance to the nearest hole (∞ for hole-free domains)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = np.full(len(pts), np.inf)
    for hole in dom.holes:
        d = np.minimum(d, hole.shape.exterior_distance(pts))
    return d


def domain_distance(dom: HoledDomain, x) -> float:
    x = np.asarray(x, dtype=float)
    if not point_in_domain(dom, x):
        raise OutsideDomainError(f"Point {x.tolist()} is not in the domain")
    return float(distance_field(dom, x)[0])


def closest_boundary_point(dom: HoledDomain, x) -> tuple[np.ndarray, int | None]:
    """Nearest point of ∂Ω₁ and the index of the hole it lies on (None for ∂Ω₀)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    best = float(_outer_interior_distance(dom, x)[0])
    point = dom.outer_shape.closest_point(x)[0]
    index: int | None = None
    for i, hole in enumerate(dom.holes):
        d = float(hole.shape.exterior_distance(x)[0])
        if d < best:
            best, index = d, i
            point = hole.shape.closest_point(x)[0]
    return point, index


def hole_at(dom: HoledDomain, y, tol: float | None = None) -> int:
    """Index of the hole whose analytic boundary passes within `tol` of y."""
    y = np.atleast_2d(np.asarray(y, dtype=float))
    tol = config.projection_tol if tol is None else tol
    for i, hole in enumerate(dom.holes):
        scale = max(1.0, max(hole.shape.curvature_range) ** -1)
        if hole.shape.boundary_residual(y)[0] <= tol * scale:
            return i
    raise NotOnBoundaryError(f"Point {y[0].tolist()} is not on a hole boundary")


def tangent_data(dom: HoledDomain, y) -> tuple[np.ndarray, np.ndarray]:
    """(unit tangent, unit normal into Ω₁) at a hole boundary point."""
    hole = dom.holes[hole_at(dom, y)]
    normal = hole.shape.outward_normal(np.atleast_2d(y))[0]
    tangent = np.array([-normal[1], normal[0]])
    return tangent, normal


# ============================================================================
# Areas and segments
# ============================================================================


def area_in_domain(poly: ConvexPolygon, dom: HoledDomain) -> float:
    """|poly ∩ Ω₁| = |poly ∩ Ω₀| − Σ |poly ∩ hole| on the polygonal domain."""
    area = intersection_area(poly, dom.outer)
    for hole in dom.holes:
        area -= intersection_area(poly, hole.polygon)
    return max(area, 0.0)


def segment_domain_clip(dom: HoledDomain, p0, p1) -> list[tuple[float, float]]:
    """Parameter intervals of the segment p0→p1 lying in the polygonal Ω₁."""
    base = segment_clip(p0, p1, dom.outer)
    if base is None:
        return []
    intervals = [base]
    for hole in dom.holes:
        cut = segment_clip(p0, p1, hole.polygon)
        if cut is None:
            continue
        nxt = []
        for t0, t1 in intervals:
            if cut[1] <= t0 or cut[0] >= t1:
                nxt.append((t0, t1))
                continue
            if cut[0] > t0:
                nxt.append((t0, cut[0]))
            if cut[1] < t1:
                nxt.append((cut[1], t1))
        intervals = nxt
    return intervals
