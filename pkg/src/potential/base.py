"""Convex potential interface."""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np


def as_points(x) -> tuple[np.ndarray, bool]:
    """Coerce to an (m, 2) array; the flag records whether a single point was given."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    return np.atleast_2d(arr), single


class ConvexPotential(ABC):
    """A convex function on the plane with a subgradient oracle."""

    is_discrete: bool = False

    @abstractmethod
    def values(self, points: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def subgradients(self, points: np.ndarray) -> np.ndarray: ...

    def eval(self, x):
        pts, single = as_points(x)
        out = self.values(pts)
        return float(out[0]) if single else out

    def subgradient(self, x):
        pts, single = as_points(x)
        out = self.subgradients(pts)
        return out[0] if single else out

    __call__ = eval


class AnalyticPotential(ConvexPotential):
    """Potential with closed-form second derivatives."""

    @abstractmethod
    def hessians(self, points: np.ndarray) -> np.ndarray: ...

    def hessian(self, x):
        pts, single = as_points(x)
        out = self.hessians(pts)
        return out[0] if single else out

    def hessian_norm(self, x):
        """Largest Hessian eigenvalue (operator norm)."""
        pts, single = as_points(x)
        out = np.linalg.eigvalsh(self.hessians(pts))[:, -1]
        return float(out[0]) if single else out
