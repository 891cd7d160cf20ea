"""
Per-point section analysis.

Each point runs max height, tangency, the boundary-centered section at the
tangency height, its diagnostics and the engulfing constant. Points are
independent and analyzed best effort: a failure is logged and recorded in
the row's error column, never raised.
"""

from __future__ import annotations

import numpy as np

from common.errors import LabError, NotApplicableError
from common.logging import get_logger
from common.parallel import ordered_map
from geometry.domain import HoledDomain, domain_distance
from potential.base import ConvexPotential
from sections.centering import centered_section
from sections.diagnostics import diagnostics
from sections.engulfing import engulfing_check
from sections.maximal import max_height
from sections.schemas import ClassifierThresholds, SectionRow

logger = get_logger(__name__)


class SectionAnalyzer:
    def __init__(
        self,
        potential: ConvexPotential,
        dom: HoledDomain,
        thresholds: ClassifierThresholds | None = None,
        threads: int | None = None,
    ):
        self.potential = potential
        self.dom = dom
        self.thresholds = thresholds or ClassifierThresholds()
        self.threads = threads

    def sample_points(self, d_band: tuple[float, float], n_distances: int, n_angles: int = 4) -> np.ndarray:
        """Points y(θ) + d·n(θ) along hole normals, d on a geometric grid over the band."""
        d = np.geomspace(d_band[0], d_band[1], n_distances)
        theta = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
        points = []
        for hole in self.dom.holes:
            y, n, _, _ = hole.shape.boundary_frame(theta)
            points.append((y[:, None, :] + d[None, :, None] * n[:, None, :]).reshape(-1, 2))
        return np.concatenate(points) if points else np.empty((0, 2))

    def analyze_point(self, x) -> SectionRow:
        x = np.asarray(x, dtype=float)
        row = SectionRow(x=float(x[0]), y=float(x[1]), d=float("nan"))
        stage = "distance"
        try:
            row.d = domain_distance(self.dom, x)
            stage = "max_height"
            maximal = max_height(self.potential, self.dom, x)
            box = maximal.section.box
            row.h_bar, row.lam, row.Lam, row.eta = maximal.height, box.short, box.long, box.eccentricity
            if maximal.hole is None:
                raise NotApplicableError("Maximal section touches no hole")

            stage = "boundary_section"
            y = maximal.contact
            boundary = centered_section(self.potential, y, maximal.height)
            diag = diagnostics(boundary, self.dom, self.thresholds)
            row.exterior_fraction = diag.exterior_fraction
            row.l_ratio = diag.tangent_length_ratio
            row.case = diag.case
            row.model_ratio = diag.model_geometry_ratio

            stage = "engulfing"
            row.K_engulf = engulfing_check(self.potential, self.dom, x, maximal.height, contact=y).K
        except LabError as e:
            row.error = f"{stage}: {type(e).__name__}: {e}"
            logger.warning(f"[Sections] Point {x.tolist()} failed at {stage}: {type(e).__name__}: {e}")
        return row

    def run(self, points) -> list[SectionRow]:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        logger.info(f"[Sections] Analyzing {len(points)} points")
        rows = ordered_map(self.analyze_point, list(points), threads=self.threads)
        failed = sum(r.error is not None for r in rows)
        if failed:
            logger.warning(f"[Sections] {failed}/{len(rows)} points recorded errors")
        return rows
