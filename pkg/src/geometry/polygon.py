"""
Convex polygon primitives.

Vertices are stored as a read-only (n, 2) float array in counterclockwise
order. All clipping is done against half-planes {x : x·normal ≤ offset};
an empty result is returned as None.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial.distance import pdist

from common.config import config
from common.errors import DegenerateGeometryError

# ============================================================================
# Polygon value type
# ============================================================================


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon with counterclockwise vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_vertices(cls, vertices) -> ConvexPolygon:
        """Build from user-supplied vertices: orient counterclockwise and validate."""
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if len(v) >= 3 and signed_area(v) < 0:
            v = v[::-1]
        poly = cls(v)
        poly.validate()
        return poly

    @classmethod
    def from_points(cls, points) -> ConvexPolygon:
        """Convex hull of a point cloud."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        try:
            hull = ConvexHull(pts)
        except Exception as e:  # qhull raises on flat input
            raise DegenerateGeometryError(f"Convex hull of {len(pts)} points is degenerate: {e}") from e
        return cls(pts[hull.vertices])

    @classmethod
    def rectangle(cls, center, axis, half_lengths) -> ConvexPolygon:
        c = np.asarray(center, dtype=float)
        a = np.asarray(axis, dtype=float)
        a = a / np.linalg.norm(a)
        b = np.array([-a[1], a[0]])
        big, small = half_lengths
        corners = [c - big * a - small * b, c + big * a - small * b, c + big * a + small * b, c - big * a + small * b]
        return cls(np.array(corners))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        return polygon_area(self)

    @property
    def barycenter(self) -> np.ndarray:
        return barycenter(self)

    @property
    def diameter(self) -> float:
        return polygon_diameter(self)

    @property
    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def halfplanes(self) -> tuple[np.ndarray, np.ndarray]:
        """Outward unit normals (n, 2) and offsets (n,) of the edge half-planes."""
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        normals = np.column_stack([e[:, 1], -e[:, 0]])
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        offsets = np.einsum("ij,ij->i", normals, v)
        return normals, offsets

    def validate(self) -> None:
        """Check convexity, distinct consecutive vertices and positive area."""
        v = self.vertices
        if len(v) < 3:
            raise DegenerateGeometryError(f"Polygon needs at least 3 vertices, got {len(v)}")
        diam = polygon_diameter(self)
        e = np.roll(v, -1, axis=0) - v
        if np.any(np.linalg.norm(e, axis=1) <= config.geometric_tol * diam):
            raise DegenerateGeometryError("Polygon has duplicate consecutive vertices")
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(cross < -config.geometric_tol * diam**2):
            raise DegenerateGeometryError("Polygon is not convex or not counterclockwise")
        if polygon_area(self) <= config.geometric_tol * diam**2:
            raise DegenerateGeometryError("Polygon has zero area")


# ============================================================================
# Measurements
# ============================================================================


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def polygon_area(poly: ConvexPolygon) -> float:
    return abs(signed_area(poly.vertices))


def barycenter(poly: ConvexPolygon) -> np.ndarray:
    v = poly.vertices
    o = v[0]
    a, b = v[1:-1] - o, v[2:] - o
    w = 0.5 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    total = w.sum()
    if total <= 0:
        return v.mean(axis=0)
    return o + (w[:, None] * (a + b)).sum(axis=0) / (3.0 * total)


def second_moment(poly: ConvexPolygon) -> np.ndarray:
    """Covariance matrix of the uniform distribution on the polygon."""
    v = poly.vertices
    g = barycenter(poly)
    p = v - g
    a, b = p[1:-1] - p[0], p[2:] - p[0]
    w = 0.5 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    total = w.sum()
    # Fan triangles (p0, p_i, p_{i+1}): ∫ x xᵀ = A/12 (Σ v vᵀ + (Σ v)(Σ v)ᵀ)
    t0 = np.broadcast_to(p[0], a.shape)
    t1, t2 = p[1:-1], p[2:]
    s = t0 + t1 + t2
    outer = (
        np.einsum("ni,nj->nij", t0, t0)
        + np.einsum("ni,nj->nij", t1, t1)
        + np.einsum("ni,nj->nij", t2, t2)
        + np.einsum("ni,nj->nij", s, s)
    )
    return (w[:, None, None] * outer).sum(axis=0) / (12.0 * total)


def polygon_diameter(poly: ConvexPolygon) -> float:
    v = poly.vertices
    if len(v) < 2:
        return 0.0
    return float(pdist(v).max())


# ============================================================================
# Clipping
# ============================================================================


def _clip_vertices(v: np.ndarray, normal: np.ndarray, offset: float, tol: float) -> np.ndarray | None:
    s = v @ normal - offset
    inside = s <= tol
    if inside.all():
        return v
    if not inside.any():
        return None

    n = len(v)
    nxt = np.roll(inside, -1)
    exits = np.flatnonzero(inside & ~nxt)
    entries = np.flatnonzero(~inside & nxt)
    if len(exits) == 1 and len(entries) == 1:
        i_out, i_in = exits[0], entries[0]
        j_out, j_in = (i_out + 1) % n, (i_in + 1) % n
        p_out = v[i_out] + np.clip(s[i_out] / (s[i_out] - s[j_out]), 0.0, 1.0) * (v[j_out] - v[i_out])
        p_in = v[i_in] + np.clip(s[i_in] / (s[i_in] - s[j_in]), 0.0, 1.0) * (v[j_in] - v[i_in])
        idx = np.arange(j_in, j_in + ((i_out - j_in) % n) + 1) % n
        out = np.vstack([p_in, v[idx], p_out])
    else:
        # Sutherland–Hodgman fallback for near-tangent noise
        pts = []
        for i in range(n):
            j = (i + 1) % n
            if inside[i]:
                pts.append(v[i])
            if inside[i] != inside[j]:
                pts.append(v[i] + s[i] / (s[i] - s[j]) * (v[j] - v[i]))
        out = np.array(pts)

    out = _drop_duplicates(out, tol)
    if len(out) < 3 or abs(signed_area(out)) <= tol * tol:
        return None
    return out


def _drop_duplicates(v: np.ndarray, tol: float) -> np.ndarray:
    if len(v) < 2:
        return v
    gap = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1)
    keep = gap > tol
    if not keep.any():
        return v[:1]
    return v[keep]


def _tolerance(v: np.ndarray) -> float:
    extent = float(np.ptp(v, axis=0).max()) if len(v) else 0.0
    return config.geometric_tol * max(extent, 1e-300)


def clip_halfplane(poly: ConvexPolygon, normal, offset: float) -> ConvexPolygon | None:
    """Return poly ∩ {x : x·normal ≤ offset}, or None when empty."""
    out = _clip_vertices(poly.vertices, np.asarray(normal, dtype=float), float(offset), _tolerance(poly.vertices))
    if out is None:
        return None
    return poly if out is poly.vertices else ConvexPolygon(out)


def clip_many(poly: ConvexPolygon, normals: np.ndarray, offsets: np.ndarray) -> ConvexPolygon | None:
    """Clip by several half-planes, skipping those no vertex violates."""
    v = poly.vertices
    tol = _tolerance(v)
    violated = np.flatnonzero(((v @ normals.T) - offsets > tol).any(axis=0))
    for k in violated:
        v = _clip_vertices(v, normals[k], offsets[k], tol)
        if v is None:
            return None
    return poly if v is poly.vertices else ConvexPolygon(v)


def polygon_intersection(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon | None:
    normals, offsets = b.halfplanes()
    return clip_many(a, normals, offsets)


def intersection_area(a: ConvexPolygon, b: ConvexPolygon) -> float:
    lo_a, hi_a = a.bbox
    lo_b, hi_b = b.bbox
    if np.any(hi_a < lo_b) or np.any(hi_b < lo_a):
        return 0.0
    inter = polygon_intersection(a, b)
    return 0.0 if inter is None else inter.area


# ============================================================================
# Predicates and distances
# ============================================================================


def contains_points(poly: ConvexPolygon, points, tol: float = 0.0) -> np.ndarray:
    """Boolean mask of points inside (or within `tol` of) the polygon."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    normals, offsets = poly.halfplanes()
    return np.all(pts @ normals.T - offsets <= tol, axis=1)


def segment_clip(p0, p1, poly: ConvexPolygon) -> tuple[float, float] | None:
    """Cyrus–Beck: parameter interval [t0, t1] ⊂ [0, 1] of the segment inside the polygon."""
    p0 = np.asarray(p0, dtype=float)
    d = np.asarray(p1, dtype=float) - p0
    normals, offsets = poly.halfplanes()
    num = offsets - normals @ p0
    den = normals @ d
    tol = _tolerance(poly.vertices)

    parallel = np.abs(den) <= 1e-300
    if np.any(num[parallel] < -tol):
        return None
    with np.errstate(divide="ignore", invalid="ignore"):
        t = num / den
    t0 = max(0.0, float(t[den < 0].max(initial=-np.inf)))
    t1 = min(1.0, float(t[den > 0].min(initial=np.inf)))
    if t1 <= t0:
        return None
    return t0, t1


def point_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points (m, 2) to segments a[k]b[k] (k, 2); result (m, k)."""
    ab = b - a
    ap = points[:, None, :] - a[None, :, :]
    denom = np.einsum("kj,kj->k", ab, ab)
    t = np.clip(np.einsum("mkj,kj->mk", ap, ab) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    proj = a[None, :, :] + t[..., None] * ab[None, :, :]
    return np.linalg.norm(points[:, None, :] - proj, axis=2)


def polygon_distance(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Euclidean distance between two convex polygons (0 when they overlap)."""
    if contains_points(b, a.vertices).any() or contains_points(a, b.vertices).any():
        return 0.0
    if polygon_intersection(a, b) is not None:
        return 0.0
    va, vb = a.vertices, b.vertices
    d1 = point_segment_distance(va, vb, np.roll(vb, -1, axis=0)).min()
    d2 = point_segment_distance(vb, va, np.roll(va, -1, axis=0)).min()
    return float(min(d1, d2))
