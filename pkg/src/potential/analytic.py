"""
Analytic oracle potentials.

ModelPotential is the Brenier potential of the annulus {r < |x| < R} onto the
centered disk of radius √(R² − r²):

    u(x) = ∫₀^{|x|} √((s² − r²)₊) ds

Quadratic potentials have constant Hessian with determinant one.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from common.errors import DegenerateSetError, InvalidParameterError
from common.logging import get_logger
from potential.base import AnalyticPotential

logger = get_logger(__name__)

# ============================================================================
# Model example
# ============================================================================


def _check_radius(r: float) -> None:
    if not r > 0:
        raise InvalidParameterError(f"Inner radius must be positive, got {r}")


def model_eval_quadrature(r: float, rho: float) -> float:
    """Integral form of the model potential by adaptive quadrature."""
    _check_radius(r)
    if rho <= r:
        return 0.0
    value, _ = quad(lambda s: np.sqrt(max(s * s - r * r, 0.0)), r, rho, epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(value)


def _closed_form(r: float, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    out = np.zeros_like(rho)
    mask = rho > r
    rm = rho[mask]
    q = np.sqrt((rm - r) * (rm + r))
    out[mask] = 0.5 * rm * q - 0.5 * r * r * np.arccosh(rm / r)
    return out


@lru_cache(maxsize=64)
def _validated(r: float) -> bool:
    """One-time check of the closed form against quadrature."""
    big = float(np.sqrt(1.0 / np.pi + r * r))
    for rho in (1.01 * r, 1.5 * r, big, 2.0 * big):
        exact = model_eval_quadrature(r, rho)
        closed = float(_closed_form(r, np.array([rho]))[0])
        if abs(exact - closed) > 1e-10 * max(1.0, abs(exact)):
            raise RuntimeError(f"Model closed form disagrees with quadrature at r={r}, ρ={rho}: {closed} vs {exact}")
    logger.debug(f"[Model] Closed form validated for r={r}")
    return True


def model_eval(r: float, rho):
    """Closed-form model potential at radius ρ (scalar or array)."""
    _check_radius(r)
    _validated(float(r))
    arr = np.asarray(rho, dtype=float)
    if np.any(arr < 0):
        raise InvalidParameterError("Radius must be non-negative")
    out = _closed_form(r, np.atleast_1d(arr))
    return float(out[0]) if arr.ndim == 0 else out


def model_hessian(r: float, rho):
    """(radial, tangential) Hessian eigenvalues ρ/√(ρ²−r²) and √(ρ²−r²)/ρ."""
    _check_radius(r)
    arr = np.asarray(rho, dtype=float)
    if np.any(arr <= r):
        raise DegenerateSetError(f"Model Hessian requested on the degenerate set |x| ≤ r = {r}")
    q = np.sqrt((arr - r) * (arr + r))
    radial, tangential = arr / q, q / arr
    if arr.ndim == 0:
        return float(radial), float(tangential)
    return radial, tangential


class ModelPotential(AnalyticPotential):
    def __init__(self, r: float):
        _check_radius(r)
        self.r = float(r)
        _validated(self.r)

    @property
    def R(self) -> float:
        return float(np.sqrt(1.0 / np.pi + self.r**2))

    def values(self, points: np.ndarray) -> np.ndarray:
        return _closed_form(self.r, np.linalg.norm(points, axis=1))

    def subgradients(self, points: np.ndarray) -> np.ndarray:
        rho = np.linalg.norm(points, axis=1)
        q = np.sqrt(np.maximum((rho - self.r) * (rho + self.r), 0.0))
        scale = np.where(rho > self.r, q / np.where(rho > 0, rho, 1.0), 0.0)
        return points * scale[:, None]

    def hessians(self, points: np.ndarray) -> np.ndarray:
        rho = np.linalg.norm(points, axis=1)
        radial, tangential = model_hessian(self.r, rho)
        xhat = points / rho[:, None]
        outer = np.einsum("ni,nj->nij", xhat, xhat)
        eye = np.broadcast_to(np.eye(2), outer.shape)
        return radial[:, None, None] * outer + tangential[:, None, None] * (eye - outer)

    def hessian_norm(self, x):
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        radial, _ = model_hessian(self.r, np.linalg.norm(pts, axis=1))
        return float(radial[0]) if np.ndim(x) == 1 else radial


# ============================================================================
# Quadratics
# ============================================================================


class QuadraticPotential(AnalyticPotential):
    """u(x) = ½ xᵀAx for a symmetric positive definite A."""

    def __init__(self, matrix):
        a = np.array(matrix, dtype=float)
        if a.shape != (2, 2) or not np.allclose(a, a.T) or np.linalg.eigvalsh(a)[0] <= 0:
            raise InvalidParameterError(f"Quadratic needs a symmetric positive definite 2×2 matrix, got {a.tolist()}")
        a.setflags(write=False)
        self.matrix = a

    def values(self, points: np.ndarray) -> np.ndarray:
        return 0.5 * np.einsum("ni,ij,nj->n", points, self.matrix, points)

    def subgradients(self, points: np.ndarray) -> np.ndarray:
        return points @ self.matrix

    def hessians(self, points: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.matrix, (len(points), 2, 2)).copy()


def quadratic(a: float) -> QuadraticPotential:
    """u = a·x₁²/2 + x₂²/(2a)."""
    if not a > 0:
        raise InvalidParameterError(f"Quadratic scale must be positive, got {a}")
    return QuadraticPotential(np.diag([a, 1.0 / a]))


def sheared_quadratic(a: float, shear: float) -> QuadraticPotential:
    """u(x) = |S x|²/2 with S = diag(√a, 1/√a)·[[1, K], [0, 1]]; det D²u = 1."""
    if not a > 0:
        raise InvalidParameterError(f"Quadratic scale must be positive, got {a}")
    s = np.diag([np.sqrt(a), 1.0 / np.sqrt(a)]) @ np.array([[1.0, shear], [0.0, 1.0]])
    return QuadraticPotential(s.T @ s)
