"""
Boundary diagnostics of a section's John box and the case classifier.

All three measurements are taken on the box x + R_h(x) rather than on the
section itself: the exterior fraction, the length of the tangent line
clipped to the box relative to Λ, and the largest boundary distance in it.
"""

from __future__ import annotations

import numpy as np

from common.config import config
from geometry.domain import HoledDomain, area_in_domain, closest_boundary_point, distance_field
from geometry.polygon import segment_clip
from sections.centering import Section
from sections.schemas import ClassifierThresholds, SectionCase, SectionDiagnostics


def boundary_tangent(dom: HoledDomain, x) -> np.ndarray | None:
    """Unit tangent of the nearest hole at its closest point to x (None without holes)."""
    point, hole = closest_boundary_point(dom, x)
    if hole is None:
        return None
    normal = dom.holes[hole].shape.outward_normal(point[None, :])[0]
    return np.array([-normal[1], normal[0]])


def tangent_length(sec: Section, tangent) -> float:
    """Length of the line through the section center along `tangent`, clipped to the box."""
    t = np.asarray(tangent, dtype=float)
    t = t / np.linalg.norm(t)
    reach = 4.0 * sec.box.long
    p0, p1 = sec.center - reach * t, sec.center + reach * t
    cut = segment_clip(p0, p1, sec.box.polygon())
    return 0.0 if cut is None else 2.0 * reach * (cut[1] - cut[0])


def sup_distance(sec: Section, dom: HoledDomain, grid: int | None = None) -> float:
    n = grid or config.diagnostics_grid
    s = np.linspace(-1.0, 1.0, n)
    a, b = np.meshgrid(s, s, indexing="ij")
    box = sec.box
    pts = box.center + (a.ravel() * box.long)[:, None] * box.axis + (b.ravel() * box.short)[:, None] * box.short_axis
    return float(distance_field(dom, pts).max())


def diagnostics(
    sec: Section,
    dom: HoledDomain,
    thresholds: ClassifierThresholds | None = None,
    tangent=None,
) -> SectionDiagnostics:
    box = sec.box
    inside = area_in_domain(box.polygon(), dom)
    fraction = float(np.clip(1.0 - inside / box.area, 0.0, 1.0))

    if tangent is None:
        tangent = boundary_tangent(dom, sec.center)
    ratio = 0.0 if tangent is None else tangent_length(sec, tangent) / box.long

    diag = SectionDiagnostics(
        exterior_fraction=fraction,
        tangent_length_ratio=ratio,
        eccentricity=box.eccentricity,
        sup_distance=sup_distance(sec, dom),
        long=box.long,
        short=box.short,
        height=sec.height,
    )
    if thresholds is not None:
        diag.case = classify(diag, thresholds)
    return diag


def classify(diag: SectionDiagnostics, thresholds: ClassifierThresholds | None = None) -> SectionCase:
    thr = thresholds or ClassifierThresholds()
    straddles = diag.exterior_fraction > thr.eps1
    if straddles and diag.tangent_length_ratio > thr.eps2:
        return SectionCase.MODEL_GEOMETRY
    if diag.eccentricity <= thr.eta_floor:
        return SectionCase.BOUNDED
    if not straddles:
        return SectionCase.INTERIOR_LIKE
    return SectionCase.TRANSVERSAL
