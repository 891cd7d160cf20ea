"""
Analytic shape descriptors.

Shapes are the JSON-facing geometry schema (`"type"` discriminator) and carry
the exact curve data: polygonization, distance, tangent/normal and curvature.
Polygons are inscribed, so their vertices lie on the analytic curve.
"""

from __future__ import annotations

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, field_validator

from geometry.polygon import ConvexPolygon, contains_points

Point = tuple[float, float]


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


# ============================================================================
# Disk
# ============================================================================


class DiskShape(BaseModel):
    """Disk given by center and radius."""

    model_config = ConfigDict(frozen=True)

    type: Literal["disk"] = "disk"
    center: Point = (0.0, 0.0)
    radius: PositiveFloat

    @property
    def area(self) -> float:
        return float(np.pi * self.radius**2)

    @property
    def curvature_range(self) -> tuple[float, float]:
        return 1.0 / self.radius, 1.0 / self.radius

    @property
    def extent(self) -> float:
        """Largest distance from the origin to a point of the shape."""
        return float(np.hypot(*self.center) + self.radius)

    def scaled(self, s: float) -> DiskShape:
        return DiskShape(center=(self.center[0] * s, self.center[1] * s), radius=self.radius * s)

    def polygon(self, n: int) -> ConvexPolygon:
        theta = 2.0 * np.pi * np.arange(n) / n
        return ConvexPolygon(self.boundary_point(theta))

    def boundary_point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.asarray(self.center) + self.radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    def boundary_frame(self, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Point, outward normal, speed |y'(θ)| and curvature at parameters θ."""
        theta = np.asarray(theta, dtype=float)
        normal = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        speed = np.full(theta.shape, self.radius)
        kappa = np.full(theta.shape, 1.0 / self.radius)
        return np.asarray(self.center) + self.radius * normal, normal, speed, kappa

    def contains(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        return np.einsum("ij,ij->i", p, p) <= self.radius**2

    def exterior_distance(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        return np.maximum(np.linalg.norm(p, axis=1) - self.radius, 0.0)

    def interior_distance(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        return np.maximum(self.radius - np.linalg.norm(p, axis=1), 0.0)

    def closest_point(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        norm = np.linalg.norm(p, axis=1, keepdims=True)
        direction = np.where(norm > 0, p / np.where(norm > 0, norm, 1.0), np.array([1.0, 0.0]))
        return np.asarray(self.center) + self.radius * direction

    def boundary_residual(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        return np.abs(np.linalg.norm(p, axis=1) - self.radius)

    def outward_normal(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        return p / np.linalg.norm(p, axis=1, keepdims=True)


# ============================================================================
# Ellipse
# ============================================================================


class EllipseShape(BaseModel):
    """Ellipse given by center, semi-axes (along the rotated x and y axes) and rotation in radians."""

    model_config = ConfigDict(frozen=True)

    type: Literal["ellipse"] = "ellipse"
    center: Point = (0.0, 0.0)
    semi_axes: tuple[PositiveFloat, PositiveFloat]
    rotation: float = 0.0

    @property
    def area(self) -> float:
        return float(np.pi * self.semi_axes[0] * self.semi_axes[1])

    @property
    def curvature_range(self) -> tuple[float, float]:
        big, small = max(self.semi_axes), min(self.semi_axes)
        return small / big**2, big / small**2

    @property
    def extent(self) -> float:
        return float(np.hypot(*self.center) + max(self.semi_axes))

    def scaled(self, s: float) -> EllipseShape:
        return EllipseShape(
            center=(self.center[0] * s, self.center[1] * s),
            semi_axes=(self.semi_axes[0] * s, self.semi_axes[1] * s),
            rotation=self.rotation,
        )

    def _local(self, points) -> np.ndarray:
        p = np.atleast_2d(points) - np.asarray(self.center)
        return p @ _rotation(self.rotation)

    def _world(self, local: np.ndarray) -> np.ndarray:
        return local @ _rotation(self.rotation).T + np.asarray(self.center)

    def polygon(self, n: int) -> ConvexPolygon:
        theta = 2.0 * np.pi * np.arange(n) / n
        return ConvexPolygon(self.boundary_point(theta))

    def boundary_point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        a, b = self.semi_axes
        local = np.stack([a * np.cos(theta), b * np.sin(theta)], axis=-1)
        return self._world(local.reshape(-1, 2)).reshape(local.shape)

    def boundary_frame(self, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        theta = np.asarray(theta, dtype=float).ravel()
        a, b = self.semi_axes
        rot = _rotation(self.rotation)
        point = self.boundary_point(theta)
        normal = np.stack([b * np.cos(theta), a * np.sin(theta)], axis=-1)
        normal = (normal / np.linalg.norm(normal, axis=1, keepdims=True)) @ rot.T
        q = a**2 * np.sin(theta) ** 2 + b**2 * np.cos(theta) ** 2
        return point, normal, np.sqrt(q), a * b / q**1.5

    def contains(self, points) -> np.ndarray:
        u = self._local(points)
        a, b = self.semi_axes
        return (u[:, 0] / a) ** 2 + (u[:, 1] / b) ** 2 <= 1.0

    def _project_exterior(self, points, iterations: int = 100) -> tuple[np.ndarray, np.ndarray]:
        """Newton on F(t) = (a·u/(t+a²))² + (b·v/(t+b²))² − 1 from t = 0; F is convex and decreasing."""
        local = self._local(points)
        a, b = self.semi_axes
        u, v = np.abs(local[:, 0]), np.abs(local[:, 1])
        t = np.zeros(len(local))
        outside = (u / a) ** 2 + (v / b) ** 2 > 1.0
        for _ in range(iterations):
            ea, eb = a * u / (t + a**2), b * v / (t + b**2)
            f = ea**2 + eb**2 - 1.0
            df = -2.0 * (ea**2 / (t + a**2) + eb**2 / (t + b**2))
            step = np.where(outside & (df < 0), -f / np.where(df < 0, df, -1.0), 0.0)
            t = t + step
            if np.all(np.abs(step) <= 1e-15 * (1.0 + t)):
                break
        closest = np.stack([a**2 * u / (t + a**2), b**2 * v / (t + b**2)], axis=-1) * np.sign(local + (local == 0))
        dist = np.where(outside, np.linalg.norm(np.stack([u, v], axis=-1) - np.abs(closest), axis=1), 0.0)
        return self._world(closest), dist

    def exterior_distance(self, points) -> np.ndarray:
        return self._project_exterior(points)[1]

    def closest_point(self, points) -> np.ndarray:
        """Closest boundary point for exterior points; radial projection for interior ones."""
        pts = np.atleast_2d(points)
        proj, _ = self._project_exterior(pts)
        inside = self.contains(pts)
        if inside.any():
            local = self._local(pts[inside])
            a, b = self.semi_axes
            scale = np.sqrt((local[:, 0] / a) ** 2 + (local[:, 1] / b) ** 2)
            scale = np.where(scale > 0, scale, 1.0)
            proj[inside] = self._world(local / scale[:, None])
        return proj

    def boundary_residual(self, points) -> np.ndarray:
        """First-order distance |g|/|∇g| to the curve g = (u/a)² + (v/b)² − 1 = 0."""
        u = self._local(points)
        a, b = self.semi_axes
        g = (u[:, 0] / a) ** 2 + (u[:, 1] / b) ** 2 - 1.0
        grad = np.stack([2 * u[:, 0] / a**2, 2 * u[:, 1] / b**2], axis=-1)
        return np.abs(g) / np.maximum(np.linalg.norm(grad, axis=1), 1e-300)

    def outward_normal(self, points) -> np.ndarray:
        u = self._local(points)
        a, b = self.semi_axes
        grad = np.stack([u[:, 0] / a**2, u[:, 1] / b**2], axis=-1) @ _rotation(self.rotation).T
        return grad / np.linalg.norm(grad, axis=1, keepdims=True)


# ============================================================================
# Polygon
# ============================================================================


class PolygonShape(BaseModel):
    """Convex polygon given by its vertices (any orientation)."""

    model_config = ConfigDict(frozen=True)

    type: Literal["polygon"] = "polygon"
    vertices: list[Point]

    @field_validator("vertices")
    @classmethod
    def _at_least_three(cls, v: list[Point]) -> list[Point]:
        if len(v) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        return v

    @property
    def area(self) -> float:
        return self.polygon().area

    @property
    def extent(self) -> float:
        return float(np.linalg.norm(np.asarray(self.vertices), axis=1).max())

    def scaled(self, s: float) -> PolygonShape:
        return PolygonShape(vertices=[(x * s, y * s) for x, y in self.vertices])

    def polygon(self, n: int | None = None) -> ConvexPolygon:
        return ConvexPolygon.from_vertices(self.vertices)

    def contains(self, points) -> np.ndarray:
        return contains_points(self.polygon(), points)

    def interior_distance(self, points) -> np.ndarray:
        normals, offsets = self.polygon().halfplanes()
        slack = offsets - np.atleast_2d(points) @ normals.T
        return np.maximum(slack.min(axis=1), 0.0)

    def closest_point(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        v = self.polygon().vertices
        a, b = v, np.roll(v, -1, axis=0)
        ab = b - a
        t = np.einsum("mkj,kj->mk", pts[:, None, :] - a[None], ab) / np.einsum("kj,kj->k", ab, ab)
        proj = a[None] + np.clip(t, 0.0, 1.0)[..., None] * ab[None]
        best = np.linalg.norm(pts[:, None, :] - proj, axis=2).argmin(axis=1)
        return proj[np.arange(len(pts)), best]


HoleShape = Annotated[DiskShape | EllipseShape, Field(discriminator="type")]
OuterShape = Annotated[DiskShape | PolygonShape, Field(discriminator="type")]
TargetShape = Annotated[DiskShape | EllipseShape | PolygonShape, Field(discriminator="type")]


class DomainSpec(BaseModel):
    """Domain configuration file schema."""

    outer: OuterShape
    holes: list[HoleShape] = Field(default_factory=list)
    delta: PositiveFloat
