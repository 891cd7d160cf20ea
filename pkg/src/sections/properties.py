"""Property helpers for section laws: height comparability, normalization, alignment."""

from __future__ import annotations

import numpy as np

from geometry.polygon import ConvexPolygon
from geometry.rectangle import JohnBox
from potential.base import ConvexPotential
from sections.centering import Section, centered_section
from sections.schemas import HeightComparability, SectionLaws


def height_comparability(u: ConvexPotential, x, h1: float, h2: float) -> tuple[float, float]:
    """(λ_{h1}/λ_{h2}, Λ_{h1}/Λ_{h2})."""
    s1 = centered_section(u, x, h1)
    s2 = centered_section(u, x, h2, slope0=s1.slope)
    return s1.box.short / s2.box.short, s1.box.long / s2.box.long


def renormalize(sec: Section) -> tuple[np.ndarray, np.ndarray, ConvexPolygon]:
    """Affine map T(p) = A·p + c sending the John box to [−1, 1]² and the section with it."""
    box = sec.box
    a = np.vstack([box.axis / box.long, box.short_axis / box.short])
    c = -a @ box.center
    return a, c, ConvexPolygon(sec.polygon.vertices @ a.T + c)


def axis_alignment_angle(box: JohnBox) -> float:
    """Angle in degrees between the long axis and the nearest coordinate axis."""
    angle = np.degrees(np.arctan2(abs(box.axis[1]), abs(box.axis[0])))
    return float(min(angle, 90.0 - angle))


def section_laws(u: ConvexPotential, x, heights, factors=(0.5, 2.0)) -> SectionLaws:
    """Area and diameter of the centered sections at x over increasing heights (warm-started),
    and the box ratios against the sections at h·factor."""
    x = np.asarray(x, dtype=float)
    heights = sorted(float(h) for h in heights)
    area_ratio, diam, pairs = [], [], []
    slope = None
    for h in heights:
        sec = centered_section(u, x, h, slope0=slope)
        slope = sec.slope
        area_ratio.append(sec.area / h)
        diam.append(sec.diameter)
        for f in factors:
            other = centered_section(u, x, f * h, slope0=slope)
            pairs.append(
                HeightComparability(
                    h1=h,
                    h2=f * h,
                    short_ratio=sec.box.short / other.box.short,
                    long_ratio=sec.box.long / other.box.long,
                )
            )
    return SectionLaws(
        point=(float(x[0]), float(x[1])), heights=heights, area_ratio=area_ratio, diameter=diam, comparability=pairs
    )
