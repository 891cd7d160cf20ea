from __future__ import annotations

import numpy as np

from common.errors import LabError, NotApplicableError, NotOnBoundaryError
from common.logging import get_logger
from geometry.domain import HoledDomain, closest_boundary_point, hole_at
from geometry.polygon import segment_clip
from potential.base import ConvexPotential
from sections.centering import centered_section
from sections.maximal import polygon_in_domain, section_contact
from sections.schemas import EngulfingReport

logger = get_logger(__name__)


def tangency_point(dom: HoledDomain, x, contact=None) -> tuple[np.ndarray, int]:
    """Hole point the section at x is compared against, with its hole index."""
    x = np.asarray(x, dtype=float)
    try:
        return x, hole_at(dom, x)
    except NotOnBoundaryError:
        pass
    if contact is not None:
        try:
            return np.asarray(contact, dtype=float), hole_at(dom, contact)
        except NotOnBoundaryError as e:
            raise NotApplicableError(f"Contact {np.asarray(contact).tolist()} is not on a hole") from e
    point, hole = closest_boundary_point(dom, x)
    if hole is None:
        raise NotApplicableError(f"No hole tangency for x={x.tolist()}: nearest boundary is the outer one")
    return point, hole


def engulfing_check(u: ConvexPotential, dom: HoledDomain, x, h: float, contact=None) -> EngulfingReport:
    """Smallest K ≥ 1 with S_h(x) ⊂ y + K·(R_h(y) − y)."""
    x = np.asarray(x, dtype=float)
    y, hole = tangency_point(dom, x, contact)
    sec_x = centered_section(u, x, h)
    sec_y = sec_x if np.array_equal(x, y) else centered_section(u, y, h)
    k = max(1.0, sec_y.box.dilation_factor(sec_x.polygon.vertices, about=y))
    logger.debug(f"[Engulfing] x={x.tolist()} h={h:.3e} K={k:.3f}")
    return EngulfingReport(
        x=tuple(x),
        y=tuple(y),
        hole=hole,
        height=h,
        K=k,
        eccentricity_x=sec_x.eccentricity,
        eccentricity_y=sec_y.eccentricity,
    )


def tangent_center(u: ConvexPotential, dom: HoledDomain, y, h: float, iterations: int = 12) -> np.ndarray | None:
    """Point on the inward normal at the hole point y whose height-h section first fits in Ω₁."""
    y = np.asarray(y, dtype=float)
    hole = hole_at(dom, y)
    normal = dom.holes[hole].shape.outward_normal(y[None, :])[0]
    reach = 2.0 * dom.outer.diameter
    cut = segment_clip(y, y + reach * normal, dom.outer)
    if cut is None:
        return None
    exit_distance = reach * cut[1]

    def fits(d: float) -> bool:
        try:
            return polygon_in_domain(centered_section(u, y + d * normal, h).polygon, dom)
        except LabError:
            return False

    lo, hi = 0.0, None
    for k in range(1, 8):
        d = exit_distance * k / 8
        if fits(d):
            hi = d
            break
        lo = d
    if hi is None:
        return None
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if fits(mid):
            hi = mid
        else:
            lo = mid
    return y + hi * normal


def engulfing_sweep(u: ConvexPotential, dom: HoledDomain, y, heights) -> tuple[list[EngulfingReport], list[str]]:
    """K over a height sweep of sections tangent to the hole near y, with the heights that had none."""
    reports, errors = [], []
    for h in sorted(float(h) for h in heights):
        try:
            x = tangent_center(u, dom, y, h)
            if x is None:
                errors.append(f"h={h:.3e}: no tangent section along the normal at {np.asarray(y).tolist()}")
                continue
            contact, _ = section_contact(dom, centered_section(u, x, h))
            reports.append(engulfing_check(u, dom, x, h, contact=contact))
        except LabError as e:
            errors.append(f"h={h:.3e}: {type(e).__name__}: {e}")
    for err in errors:
        logger.warning(f"[Engulfing] {err}")
    return reports, errors
