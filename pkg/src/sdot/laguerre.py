"""
Laguerre (power) diagrams of the discrete potential u(x) = max_i (x·y_i − ψ_i).

Adjacency comes from the lower convex hull of the lifted points (y_i, ψ_i);
each cell is a window rectangle clipped by the half-planes of its neighbours
    x·(y_j − y_i) ≤ ψ_j − ψ_i.
Masses are measured against Ω₁ with an optional hole density t ∈ [0, 1]
(source density χ_Ω₀ − t·χ_holes), t = 1 being the actual problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from common.logging import get_logger
from geometry.domain import HoledDomain
from geometry.polygon import ConvexPolygon, clip_many, contains_points, intersection_area, segment_clip

logger = get_logger(__name__)

_ALL_PAIRS_LIMIT = 64


# ============================================================================
# Topology
# ============================================================================


def _all_pairs(n: int) -> np.ndarray:
    i, j = np.triu_indices(n, k=1)
    return np.column_stack([i, j])


def lifted_neighbors(seeds: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Candidate neighbour pairs (i < j) from the lower hull of (y_i, ψ_i)."""
    n = len(seeds)
    if n < 2:
        return np.empty((0, 2), dtype=int)
    if n <= 3:
        return _all_pairs(n)

    lifted = np.column_stack([seeds, psi])
    try:
        hull = ConvexHull(lifted)
        facets = hull.simplices[hull.equations[:, 2] < 0]
    except QhullError:
        if n <= _ALL_PAIRS_LIMIT:
            return _all_pairs(n)
        # Flat lift (e.g. ψ affine in y): joggle and keep every facet edge.
        logger.debug(f"[Laguerre] Flat lifted configuration with {n} seeds, joggling")
        hull = ConvexHull(lifted, qhull_options="QJ")
        facets = hull.simplices

    edges = np.concatenate([facets[:, [0, 1]], facets[:, [1, 2]], facets[:, [0, 2]]])
    edges.sort(axis=1)
    return np.unique(edges, axis=0)


def domain_window(dom: HoledDomain, margin: float = 0.1) -> ConvexPolygon:
    lo, hi = dom.outer.bbox
    pad = margin * float(np.max(hi - lo))
    lo, hi = lo - pad, hi + pad
    return ConvexPolygon(np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]))


def _directed_halfplanes(seeds: np.ndarray, psi: np.ndarray, pairs: np.ndarray):
    """Per-cell (neighbour indices, unit normals, offsets), grouped by source cell."""
    n = len(seeds)
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    diff = seeds[dst] - seeds[src]
    norm = np.linalg.norm(diff, axis=1)
    normals = diff / norm[:, None]
    offsets = (psi[dst] - psi[src]) / norm
    order = np.argsort(src, kind="stable")
    bounds = np.searchsorted(src[order], np.arange(n + 1))
    for i in range(n):
        sel = order[bounds[i] : bounds[i + 1]]
        yield dst[sel], normals[sel], offsets[sel]


def _cell(window: ConvexPolygon, normals: np.ndarray, offsets: np.ndarray, n: int) -> ConvexPolygon | None:
    # Off the lower lifted hull: the seed is dominated everywhere.
    if not len(normals):
        return window if n == 1 else None
    return clip_many(window, normals, offsets)


def power_cells(
    seeds: np.ndarray, psi: np.ndarray, window: ConvexPolygon, pairs: np.ndarray | None = None
) -> list[ConvexPolygon | None]:
    """Power cells restricted to `window` (None for empty cells)."""
    seeds = np.asarray(seeds, dtype=float)
    psi = np.asarray(psi, dtype=float)
    pairs = lifted_neighbors(seeds, psi) if pairs is None else pairs
    return [_cell(window, normals, offsets, len(seeds)) for _, normals, offsets in _directed_halfplanes(seeds, psi, pairs)]


# ============================================================================
# Masses
# ============================================================================


def cell_mass(cell: ConvexPolygon | None, dom: HoledDomain, hole_weight: float = 1.0) -> float:
    """|cell ∩ Ω₀| − t·Σ |cell ∩ hole|."""
    if cell is None:
        return 0.0
    mass = intersection_area(cell, dom.outer)
    if hole_weight:
        for hole in dom.holes:
            mass -= hole_weight * intersection_area(cell, hole.polygon)
    return mass


def _bbox_overlap(p0: np.ndarray, p1: np.ndarray, poly: ConvexPolygon) -> bool:
    lo, hi = poly.bbox
    return bool(np.all(np.maximum(p0, p1) >= lo) and np.all(np.minimum(p0, p1) <= hi))


def segment_mass(p0: np.ndarray, p1: np.ndarray, dom: HoledDomain, hole_weight: float = 1.0) -> float:
    """Length of the segment weighted by the source density."""
    length = float(np.linalg.norm(p1 - p0))
    if length == 0.0:
        return 0.0
    if contains_points(dom.outer, np.vstack([p0, p1])).all():
        inside = 1.0
    else:
        cut = segment_clip(p0, p1, dom.outer)
        inside = 0.0 if cut is None else cut[1] - cut[0]
    mass = inside
    if hole_weight:
        for hole in dom.holes:
            if not _bbox_overlap(p0, p1, hole.polygon):
                continue
            cut = segment_clip(p0, p1, hole.polygon)
            if cut is not None:
                mass -= hole_weight * (cut[1] - cut[0])
    return max(mass, 0.0) * length


def shared_edge(cell: ConvexPolygon | None, normal: np.ndarray, offset: float) -> tuple[np.ndarray, np.ndarray] | None:
    """Endpoints of the cell boundary on the line x·normal = offset."""
    if cell is None:
        return None
    v = cell.vertices
    scale = max(float(np.ptp(v, axis=0).max()), 1e-300)
    on_line = np.abs(v @ normal - offset) <= 1e-9 * scale
    if on_line.sum() < 2:
        return None
    pts = v[on_line]
    along = pts @ np.array([-normal[1], normal[0]])
    return pts[int(along.argmin())], pts[int(along.argmax())]


# ============================================================================
# Diagram
# ============================================================================


@dataclass
class LaguerreDiagram:
    seeds: np.ndarray
    weights: np.ndarray
    cells: list[ConvexPolygon | None]
    pairs: np.ndarray
    clipped_areas: np.ndarray
    edge_masses: np.ndarray  # shared-edge length within Ω₁ per pair
    hole_weight: float = 1.0
    window: ConvexPolygon | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.seeds)

    @property
    def total_area(self) -> float:
        return float(np.sum(self.clipped_areas))

    def laplacian_weights(self) -> np.ndarray:
        """Edge coefficients (shared-edge length within Ω₁) / |y_i − y_j|."""
        i, j = self.pairs[:, 0], self.pairs[:, 1]
        return self.edge_masses / np.linalg.norm(self.seeds[i] - self.seeds[j], axis=1)

    def locate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.argmax(pts @ self.seeds.T - self.weights, axis=1)

    def to_record(self) -> dict:
        return {
            "seeds": self.seeds.tolist(),
            "weights": self.weights.tolist(),
            "clipped_areas": self.clipped_areas.tolist(),
            "pairs": self.pairs.tolist(),
        }


def build_diagram(
    dom: HoledDomain,
    seeds,
    psi,
    hole_weight: float = 1.0,
    window: ConvexPolygon | None = None,
) -> LaguerreDiagram:
    seeds = np.asarray(seeds, dtype=float)
    psi = np.asarray(psi, dtype=float)
    window = window or domain_window(dom)
    pairs = lifted_neighbors(seeds, psi)

    cells: list[ConvexPolygon | None] = []
    edge_masses = np.zeros(len(pairs))
    pair_index = {(int(a), int(b)): k for k, (a, b) in enumerate(pairs)}
    for i, (nbrs, normals, offsets) in enumerate(_directed_halfplanes(seeds, psi, pairs)):
        cell = _cell(window, normals, offsets, len(seeds))
        cells.append(cell)
        for j, normal, offset in zip(nbrs, normals, offsets, strict=True):
            if j <= i:
                continue
            seg = shared_edge(cell, normal, offset)
            if seg is not None:
                edge_masses[pair_index[(i, int(j))]] = segment_mass(seg[0], seg[1], dom, hole_weight)

    areas = np.array([cell_mass(c, dom, hole_weight) for c in cells])
    return LaguerreDiagram(
        seeds=seeds,
        weights=psi,
        cells=cells,
        pairs=pairs,
        clipped_areas=areas,
        edge_masses=edge_masses,
        hole_weight=hole_weight,
        window=window,
    )


def cell_areas(dom: HoledDomain, seeds, psi) -> np.ndarray:
    """|cell_i ∩ Ω₁| for every seed."""
    seeds = np.asarray(seeds, dtype=float)
    psi = np.asarray(psi, dtype=float)
    cells = power_cells(seeds, psi, domain_window(dom))
    return np.array([cell_mass(c, dom) for c in cells])
