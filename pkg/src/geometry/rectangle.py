"""
Minimal-area enclosing rectangles.

The box is found over hull edge orientations (one side of the optimal
rectangle is collinear with an edge), then re-centered at the polygon
barycenter so that it is symmetric about it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from common.config import config
from common.errors import DegenerateGeometryError
from geometry.polygon import ConvexPolygon, barycenter, polygon_area, polygon_diameter


@dataclass(frozen=True)
class JohnBox:
    center: np.ndarray
    axis: np.ndarray  # unit long-axis direction
    half_lengths: tuple[float, float]  # (Λ, λ)
    trapping: float  # largest α with center + α·(box − center) ⊂ polygon
    enclosing_area: float  # area of the caliper rectangle before re-centering

    @property
    def long(self) -> float:
        return self.half_lengths[0]

    @property
    def short(self) -> float:
        return self.half_lengths[1]

    @property
    def eccentricity(self) -> float:
        return self.half_lengths[0] / self.half_lengths[1]

    @property
    def short_axis(self) -> np.ndarray:
        return np.array([-self.axis[1], self.axis[0]])

    @property
    def area(self) -> float:
        return 4.0 * self.half_lengths[0] * self.half_lengths[1]

    def polygon(self, scale: float = 1.0) -> ConvexPolygon:
        return ConvexPolygon.rectangle(self.center, self.axis, (scale * self.long, scale * self.short))

    def dilation_factor(self, points, about=None) -> float:
        """Smallest K with every point inside about + K·(box − center)."""
        c = self.center if about is None else np.asarray(about, dtype=float)
        p = np.atleast_2d(points) - c
        along = np.abs(p @ self.axis) / self.long
        across = np.abs(p @ self.short_axis) / self.short
        return float(np.maximum(along, across).max())


def _normalize_axis(axis: np.ndarray) -> np.ndarray:
    if axis[0] < 0 or (axis[0] == 0 and axis[1] < 0):
        return -axis
    return axis


def ray_exit(poly: ConvexPolygon, origin: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Largest t with origin + t·direction in the polygon, for each direction (origin inside)."""
    normals, offsets = poly.halfplanes()
    slack = offsets - normals @ origin
    rate = directions @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(rate > 0, slack[None, :] / rate, np.inf)
    return t.min(axis=1)


def min_area_rectangle(poly: ConvexPolygon) -> JohnBox:
    v = poly.vertices
    diam = polygon_diameter(poly)
    area = polygon_area(poly)
    if len(v) < 3 or area <= config.geometric_tol * max(diam, 1e-300) ** 2 or area <= 0:
        raise DegenerateGeometryError(f"Cannot fit a rectangle to a polygon of area {area:.3e}")

    edges = np.roll(v, -1, axis=0) - v
    angles = np.unique(np.mod(np.arctan2(edges[:, 1], edges[:, 0]), np.pi / 2))
    directions = np.column_stack([np.cos(angles), np.sin(angles)])
    normals = np.column_stack([-directions[:, 1], directions[:, 0]])

    along = v @ directions.T  # (n, m)
    across = v @ normals.T
    widths = along.max(axis=0) - along.min(axis=0)
    heights = across.max(axis=0) - across.min(axis=0)
    k = int(np.argmin(widths * heights))
    enclosing_area = float(widths[k] * heights[k])

    g = barycenter(poly)
    e1, e2 = directions[k], normals[k]
    h1 = max(along[:, k].max() - g @ e1, g @ e1 - along[:, k].min())
    h2 = max(across[:, k].max() - g @ e2, g @ e2 - across[:, k].min())
    if h1 >= h2:
        axis, big, small = e1, h1, h2
    else:
        axis, big, small = e2, h2, h1
    axis = _normalize_axis(axis)

    corners = ConvexPolygon.rectangle(g, axis, (big, small)).vertices - g
    trapping = float(min(1.0, ray_exit(poly, g, corners).min()))

    return JohnBox(
        center=g,
        axis=axis,
        half_lengths=(float(big), float(small)),
        trapping=trapping,
        enclosing_area=enclosing_area,
    )
