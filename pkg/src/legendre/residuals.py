"""
Structure checks for partial Legendre transforms of flat-boundary solutions.

For det D²w = χ_{x2>0} the transform is harmonic above x2 = 0, linear in x2
on vertical segments below, and its x2-derivative is continuous across the
interface.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, Field
from scipy.interpolate import RegularGridInterpolator

from common.errors import DegenerateDirectionError, InvalidParameterError
from legendre.grid import GridFunction, PLTFunction

W11_FLOOR = 1e-6


class PLTResiduals(BaseModel):
    upper_laplacian: float = Field(..., description="sup |w*_pp + w*_22| on x2 > 0")
    lower_linearity: float = Field(..., description="sup |w*_22| on vertical segments in x2 < 0")
    flux_jump: float = Field(..., description="sup |w*_2(·, 0⁺) − w*_2(·, 0⁻)|")


def plt_residuals(wstar: PLTFunction) -> PLTResiduals:
    v = wstar.values
    hp, h2 = wstar.spacings
    j0 = wstar.interface_row()
    n2 = len(wstar.x2)
    if j0 < 2 or j0 > n2 - 3:
        raise InvalidParameterError("Need at least two grid lines on each side of x2 = 0")

    up = v[j0:]
    lap = (up[1:-1, 2:] - 2.0 * up[1:-1, 1:-1] + up[1:-1, :-2]) / hp**2 + (up[2:, 1:-1] - 2.0 * up[1:-1, 1:-1] + up[:-2, 1:-1]) / h2**2

    low = v[: j0 + 1]
    lin = (low[2:, 1:-1] - 2.0 * low[1:-1, 1:-1] + low[:-2, 1:-1]) / h2**2

    above = (-3.0 * v[j0] + 4.0 * v[j0 + 1] - v[j0 + 2]) / (2.0 * h2)
    below = (3.0 * v[j0] - 4.0 * v[j0 - 1] + v[j0 - 2]) / (2.0 * h2)

    return PLTResiduals(
        upper_laplacian=float(np.abs(lap).max()),
        lower_linearity=float(np.abs(lin).max()),
        flux_jump=float(np.abs(above - below)[1:-1].max()),
    )


def flux_from_linearity(wstar: PLTFunction, a: float) -> np.ndarray:
    """w*_2(·, 0) = (w*(·, 0) − w*(·, −a)) / a, with −a taken on the grid."""
    j0 = wstar.interface_row()
    j = int(np.argmin(np.abs(wstar.x2 + a)))
    if j >= j0:
        raise InvalidParameterError(f"No grid line at x2 = −{a:g} below the interface")
    depth = wstar.x2[j0] - wstar.x2[j]
    return (wstar.values[j0] - wstar.values[j]) / depth


# ============================================================================
# Hessian entries of grid functions
# ============================================================================


def hessian_entries(w: GridFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(w11, w12, w22) by second-order finite differences, shaped like `w.values`."""
    h1, h2 = w.spacings
    w2, w1 = np.gradient(w.values, h2, h1, edge_order=2)
    w12, w11 = np.gradient(w1, h2, h1, edge_order=2)
    w22 = np.gradient(w2, h2, axis=0, edge_order=2)
    return w11, w12, w22


def _region_mask(w: GridFunction, region) -> np.ndarray:
    if region is None:
        mask = np.zeros(w.values.shape, dtype=bool)
        mask[2:-2, 2:-2] = True
        return mask
    if isinstance(region, np.ndarray):
        return region.astype(bool)
    (a1, b1), (a2, b2) = region
    X1, X2 = np.meshgrid(w.x1, w.x2)
    return (X1 >= a1) & (X1 <= b1) & (X2 >= a2) & (X2 <= b2)


def mixed_ratio(w: GridFunction, region=None) -> float:
    """sup |w12| / w11 over `region` (a box ((x1_lo, x1_hi), (x2_lo, x2_hi)) or a mask)."""
    w11, w12, _ = hessian_entries(w)
    mask = _region_mask(w, region)
    if not mask.any():
        raise InvalidParameterError("Region contains no grid points")
    if w11[mask].min() < W11_FLOOR:
        raise DegenerateDirectionError(f"w11 = {w11[mask].min():.3e} below the floor {W11_FLOOR:g}")
    return float((np.abs(w12[mask]) / w11[mask]).max())


def mixed_partial_identity(w: GridFunction, wstar: PLTFunction, region=None) -> float:
    """sup |w12 + w*_12(w1, x2)·w11| at grid points whose slope lies in the p-window."""
    w11, w12, _ = hessian_entries(w)
    h1, h2 = w.spacings
    w1 = np.gradient(w.values, h1, axis=1, edge_order=2)
    hp, hs = wstar.spacings
    ws12 = np.gradient(np.gradient(wstar.values, hp, axis=1, edge_order=2), hs, axis=0, edge_order=2)
    interp = RegularGridInterpolator((wstar.x2, wstar.p), ws12, method="cubic")

    mask = _region_mask(w, region)
    mask &= (w1 > wstar.p[1]) & (w1 < wstar.p[-2])
    if not mask.any():
        raise InvalidParameterError("No grid point has its slope inside the transform window")
    X2 = np.broadcast_to(w.x2[:, None], w.values.shape)
    at = interp(np.column_stack([X2[mask], w1[mask]]))
    return float(np.abs(w12[mask] + at * w11[mask]).max())
