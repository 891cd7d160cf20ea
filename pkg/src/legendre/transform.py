"""
Partial Legendre transform w*(p, x2) = sup_x1 (p·x1 − w(x1, x2)).

Each row is reduced to its lower convex envelope (monotone chain, linear
time on sorted abscissae). The conjugate is then read off at the envelope's
tangent points (p_k, p_k·x_k − w_k), with p_k the envelope slope at x_k,
and resampled onto the common p-window by cubic spline.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from common.errors import IncompatibleRangesError
from common.logging import get_logger
from common.parallel import ordered_map
from legendre.grid import GridFunction, PLTFunction

logger = get_logger(__name__)


def lower_envelope(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Indices of the lower convex hull of (x_i, w_i), x increasing."""
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (x[b] - x[a]) * (w[i] - w[a]) - (w[b] - w[a]) * (x[i] - x[a])
            if cross > 0:
                break
            hull.pop()
        hull.append(i)
    return np.array(hull)


def tangent_points(x: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
    """(p_k, w*(p_k)) at the envelope vertices, p strictly increasing, and whether the row is strictly convex."""
    idx = lower_envelope(x, w)
    xh, wh = x[idx], w[idx]
    smooth = len(idx) == len(x) and len(x) >= 3
    if smooth:
        p = np.gradient(wh, xh, edge_order=2)
    elif len(idx) >= 2:
        # kinked row
        p = np.gradient(wh, xh, edge_order=1)
    else:
        p = np.zeros(1)
    values = p * xh - wh
    keep = np.concatenate([[True], np.diff(p) > 1e-14 * max(1.0, float(np.abs(p).max()))])
    return p[keep], values[keep], smooth


def _row(args: tuple[np.ndarray, np.ndarray]) -> tuple[np.ndarray, np.ndarray, bool]:
    return tangent_points(*args)


def plt(w: GridFunction, p_grid: np.ndarray | None = None, threads: int | None = 1) -> PLTFunction:
    """Row-wise conjugate in x1, sampled on a common p-grid."""
    w.check_row_convexity()
    rows = ordered_map(_row, [(w.x1, w.values[j]) for j in range(len(w.x2))], threads=threads)

    lo = max(float(p[0]) for p, _, _ in rows)
    hi = min(float(p[-1]) for p, _, _ in rows)
    if not hi > lo:
        raise IncompatibleRangesError(f"Row subgradient ranges have no common window ([{lo:.4g}, {hi:.4g}])")
    if p_grid is None:
        p_grid = np.linspace(lo, hi, len(w.x1))
    else:
        p_grid = np.asarray(p_grid, dtype=float)
        if p_grid.min() < lo - 1e-12 or p_grid.max() > hi + 1e-12:
            raise IncompatibleRangesError(f"Requested p-grid leaves the common window [{lo:.4g}, {hi:.4g}]")

    values = np.empty((len(w.x2), len(p_grid)))
    for j, (p, v, smooth) in enumerate(rows):
        if smooth and len(p) >= 3:
            values[j] = CubicSpline(p, v)(p_grid)
        else:
            values[j] = np.interp(p_grid, p, v)
    logger.debug(f"[PLT] {len(w.x2)} rows on p ∈ [{lo:.4g}, {hi:.4g}]")
    return PLTFunction(p=p_grid, x2=w.x2.copy(), values=values)


def discrete_conjugate(w: GridFunction, p_grid) -> PLTFunction:
    """Exact conjugate of each row's piecewise-linear interpolant: max_i (p·x_i − w_i)."""
    p_grid = np.asarray(p_grid, dtype=float)
    values = np.empty((len(w.x2), len(p_grid)))
    for j in range(len(w.x2)):
        idx = lower_envelope(w.x1, w.values[j])
        xh, wh = w.x1[idx], w.values[j][idx]
        slopes = np.diff(wh) / np.diff(xh)
        k = np.searchsorted(slopes, p_grid)  # maximizing hull vertex
        values[j] = p_grid * xh[k] - wh[k]
    return PLTFunction(p=p_grid, x2=w.x2.copy(), values=values)
