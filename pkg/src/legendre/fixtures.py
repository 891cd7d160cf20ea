"""
Analytic grid fixtures for the transform checks.

`half_plane_solution` is an exact solution of det D²w = χ_{x2>0}: its
transform is H(p, x2) = p²/2 − x2²/2 + ε·e^p·cos x2 above the interface and
the linear extension H(p, 0) + x2·H_2(p, 0) below it. w is recovered by
inverting the row conjugate, x1 = H_p(p, x2), with Newton.
"""

from __future__ import annotations

import numpy as np

from common.errors import InvalidParameterError
from legendre.grid import GridFunction
from potential.base import ConvexPotential


def _h(p: np.ndarray, x2: np.ndarray, eps: float) -> np.ndarray:
    upper = 0.5 * p**2 - 0.5 * x2**2 + eps * np.exp(p) * np.cos(x2)
    lower = 0.5 * p**2 + eps * np.exp(p)
    return np.where(x2 > 0, upper, lower)


def _h_p(p: np.ndarray, x2: np.ndarray, eps: float) -> np.ndarray:
    return p + eps * np.exp(p) * np.where(x2 > 0, np.cos(x2), 1.0)


def half_plane_transform(p, x2, eps: float) -> np.ndarray:
    """The exact transform H(p, x2) of `half_plane_solution`."""
    return _h(np.asarray(p, dtype=float), np.asarray(x2, dtype=float), eps)


def half_plane_solution(eps: float = 0.1, a: float = 0.5, n: int = 41) -> GridFunction:
    if not 0 <= eps < 0.5:
        raise InvalidParameterError(f"Fixture needs 0 ≤ eps < 0.5 for convexity, got {eps}")
    if n % 2 == 0:
        raise InvalidParameterError("Use an odd grid size so that x2 = 0 is a grid line")

    def w(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        p = x1.copy()
        for _ in range(60):
            step = (_h_p(p, x2, eps) - x1) / (1.0 + eps * np.exp(p) * np.where(x2 > 0, np.cos(x2), 1.0))
            p -= step
            if np.abs(step).max() < 1e-15:
                break
        return p * x1 - _h(p, x2, eps)

    return GridFunction.from_callable(w, a, n)


def quadratic_fixture(a: float = 1.0, half_width: float = 1.0, n: int = 41) -> GridFunction:
    """w = a·x1²/2 + x2²/(2a)."""
    return GridFunction.from_callable(lambda x1, x2: 0.5 * a * x1**2 + 0.5 * x2**2 / a, half_width, n)


def sheared_fixture(shear: float, a: float = 1.0, half_width: float = 1.0, n: int = 41) -> GridFunction:
    """w(x) = |A x|²/2 with A = diag(√a, 1/√a)·[[1, K], [0, 1]], so w12/w11 = K."""
    m = np.diag([np.sqrt(a), 1.0 / np.sqrt(a)]) @ np.array([[1.0, shear], [0.0, 1.0]])
    q = m.T @ m
    return GridFunction.from_callable(
        lambda x1, x2: 0.5 * (q[0, 0] * x1**2 + 2.0 * q[0, 1] * x1 * x2 + q[1, 1] * x2**2), half_width, n
    )


def perturbed_fixture(c: float = 0.5, half_width: float = 0.5, n: int = 41) -> GridFunction:
    """w = x1²/2 + x2²/2 + c·x1²·x2, convex on the box but det D²w ≠ const."""
    return GridFunction.from_callable(lambda x1, x2: 0.5 * x1**2 + 0.5 * x2**2 + c * x1**2 * x2, half_width, n)


def rotated_fixture(u: ConvexPotential, origin, normal, half_width: float, n: int = 41) -> GridFunction:
    """u in the frame x = origin + ξ1·normal + ξ2·tangent, tangent = normal rotated by +90°."""
    e1 = np.asarray(normal, dtype=float)
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.array([-e1[1], e1[0]])
    o = np.asarray(origin, dtype=float)

    def w(xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        pts = o + xi1.reshape(-1, 1) * e1 + xi2.reshape(-1, 1) * e2
        return u.values(pts).reshape(xi1.shape)

    return GridFunction.from_callable(w, half_width, n)
