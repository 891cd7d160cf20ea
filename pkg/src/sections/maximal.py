"""Maximal sections: the largest height whose centered section stays inside Ω₁."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from common.config import config
from common.errors import CenteringError, LabError, OutsideDomainError
from common.logging import get_logger
from geometry.domain import HoledDomain, closest_boundary_point, distance_field, point_in_domain
from geometry.polygon import ConvexPolygon, contains_points
from potential.base import ConvexPotential
from sections.centering import Section, centered_section, uncentered_section

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class MaximalSection:
    height: float
    section: Section
    contact: np.ndarray | None  # point of ∂Ω₁ touched by the section
    hole: int | None  # hole index of the contact, None for ∂Ω₀ or no contact

    @property
    def eccentricity(self) -> float:
        return self.section.eccentricity


def _edge_samples(poly: ConvexPolygon, per_edge: int) -> np.ndarray:
    v = poly.vertices
    nxt = np.roll(v, -1, axis=0)
    t = (np.arange(1, per_edge + 1) / (per_edge + 1))[:, None, None]
    return np.concatenate([v, (v[None] + t * (nxt - v)[None]).reshape(-1, 2)])


def polygon_in_domain(poly: ConvexPolygon, dom: HoledDomain) -> bool:
    """Vertices and edge samples in Ω₁, and no hole swallowed whole."""
    if not np.all(point_in_domain(dom, _edge_samples(poly, config.edge_samples))):
        return False
    centers = np.array([h.polygon.barycenter for h in dom.holes]).reshape(-1, 2)
    return not (len(centers) and contains_points(poly, centers).any())


def max_height(u: ConvexPotential, dom: HoledDomain, x, cap: float | None = None) -> MaximalSection:
    """Log-scale bisection on h in [min_height, cap] for the last contained section."""
    x = np.asarray(x, dtype=float)
    if not point_in_domain(dom, x):
        raise OutsideDomainError(f"Point {x.tolist()} is not in the domain")
    hi = config.section_cap if cap is None else cap
    lo = config.min_height

    def attempt(h: float, slope=None) -> Section | None:
        try:
            return centered_section(u, x, h, slope0=slope)
        except LabError as e:
            logger.debug(f"[Sections] Section at x={x.tolist()} h={h:.3e} unavailable: {type(e).__name__}")
            return None

    top = attempt(hi)
    if top is not None and polygon_in_domain(top.polygon, dom):
        return MaximalSection(height=hi, section=top, contact=None, hole=None)

    inner = attempt(lo)
    if inner is None or not polygon_in_domain(inner.polygon, dom):
        logger.warning(f"[Sections] No contained section at x={x.tolist()} above h={lo:g}")
        if inner is None:
            inner = _floor_section(u, x, lo)
        return _with_contact(dom, lo, inner)

    slope = inner.slope
    for _ in range(config.max_height_iterations):
        mid = float(np.sqrt(lo * hi))
        sec = attempt(mid, slope)
        if sec is not None and polygon_in_domain(sec.polygon, dom):
            lo, inner, slope = mid, sec, sec.slope
        else:
            hi = mid
    return _with_contact(dom, lo, inner)


def _floor_section(u: ConvexPotential, x: np.ndarray, h: float) -> Section:
    """Best available section at the height floor: centered if possible, else at the best slope found."""
    try:
        return centered_section(u, x, h)
    except CenteringError as e:
        logger.warning(f"[Sections] Uncentered floor section at x={x.tolist()}: {e}")
        slope = e.best if e.best is not None else u.subgradient(x)
    except LabError as e:
        logger.warning(f"[Sections] Uncentered floor section at x={x.tolist()}: {type(e).__name__}: {e}")
        slope = u.subgradient(x)
    return uncentered_section(u, x, h, slope)


def section_contact(dom: HoledDomain, sec: Section) -> tuple[np.ndarray, int | None]:
    """Boundary point nearest to the section, with its hole index (None for the outer boundary)."""
    v = sec.polygon.vertices
    nearest = v[int(np.argmin(distance_field(dom, v)))]
    return closest_boundary_point(dom, nearest)


def _with_contact(dom: HoledDomain, h: float, sec: Section) -> MaximalSection:
    contact, hole = section_contact(dom, sec)
    return MaximalSection(height=h, section=sec, contact=contact, hole=hole)


def hessian_proxy(u: ConvexPotential, dom: HoledDomain, x) -> float:
    """η of the maximal section at x, the |D²u| surrogate for discrete potentials."""
    return max_height(u, dom, x).eccentricity
