"""
Eccentricity cascade at a hole-boundary point.

Starting from the cap height the section is classified and the height is
divided by M1 (interior-like) or M2 (transversal) until it drops below
h_stop or the section becomes bounded or model-like. Each step records
how much the previous John box had to be dilated to contain the new one;
the product of those factors over interior-like and eccentricity-increasing
transversal steps is the contraction r of the trace.
"""

from __future__ import annotations

import numpy as np

from common.config import config
from common.errors import CenteringError, InvalidParameterError
from common.logging import get_logger
from geometry.domain import HoledDomain
from geometry.polygon import intersection_area
from potential.base import ConvexPotential
from sections.centering import Section, centered_section
from sections.diagnostics import boundary_tangent, classify, diagnostics
from sections.schemas import CascadeStep, CascadeTrace, ClassifierThresholds, SectionCase

logger = get_logger(__name__)

_TERMINAL = {SectionCase.BOUNDED, SectionCase.MODEL_GEOMETRY}


def holes_met(sec: Section, dom: HoledDomain) -> int:
    return sum(intersection_area(sec.polygon, h.polygon) > 0 for h in dom.holes)


def cascade(
    u: ConvexPotential,
    dom: HoledDomain,
    y,
    h_stop: float,
    thresholds: ClassifierThresholds | None = None,
    cap: float | None = None,
) -> CascadeTrace:
    thr = thresholds or ClassifierThresholds()
    h = config.section_cap if cap is None else cap
    if not 0 < h_stop < h:
        raise InvalidParameterError(f"Stopping height must lie in (0, {h}), got {h_stop}")

    y = np.asarray(y, dtype=float)
    tangent = boundary_tangent(dom, y)
    trace = CascadeTrace(start=tuple(y), h_stop=h_stop)
    prev: Section | None = None
    slope = None

    while True:
        try:
            sec = centered_section(u, y, h, slope0=slope)
        except CenteringError as e:
            trace.terminal_reason = "centering-failure"
            e.partial = trace
            raise
        slope = sec.slope
        diag = diagnostics(sec, dom, tangent=tangent)
        case = classify(diag, thr)

        step = CascadeStep(
            height=h,
            eccentricity=diag.eccentricity,
            case=case,
            exterior_fraction=diag.exterior_fraction,
            tangent_length_ratio=diag.tangent_length_ratio,
        )
        if prev is None:
            if holes_met(sec, dom) > 1:
                trace.cap_multi_hole = True
                logger.warning(f"[Cascade] Cap section at {y.tolist()} meets more than one hole")
        else:
            last = trace.steps[-1]
            step.eta_ratio = diag.eccentricity / last.eccentricity
            step.containment = prev.box.dilation_factor(sec.box.polygon().vertices)
            if last.case == SectionCase.TRANSVERSAL and step.eta_ratio > 1.0:
                step.branch = True
                trace.l_prime += 1
            if last.case == SectionCase.INTERIOR_LIKE or step.branch:
                trace.r *= step.containment
        trace.steps.append(step)

        if case in _TERMINAL:
            trace.terminal_reason = case.value
            break
        divisor = thr.M1 if case == SectionCase.INTERIOR_LIKE else thr.M2
        if case == SectionCase.INTERIOR_LIKE:
            trace.k += 1
        else:
            trace.l += 1
        if h / divisor < h_stop:
            trace.terminal_reason = "height"
            break
        h /= divisor
        prev = sec

    logger.debug(
        f"[Cascade] y={y.tolist()} steps={len(trace.steps)} k={trace.k} l={trace.l} "
        f"l'={trace.l_prime} r={trace.r:.3e} end={trace.terminal_reason}"
    )
    return trace
