"""
Grid-sampled functions of two variables.

`values[j, i]` is the sample at (x1[i], x2[j]), so each row is a function
of x1 at fixed x2, the direction the partial transform acts in.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from common.errors import InvalidParameterError


@dataclass(frozen=True, eq=False)
class GridFunction:
    values: np.ndarray  # (n2, n1)
    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.x2), len(self.x1)):
            raise InvalidParameterError(
                f"Values of shape {self.values.shape} do not match a {len(self.x2)}×{len(self.x1)} grid"
            )

    @classmethod
    def from_callable(cls, f: Callable[[np.ndarray, np.ndarray], np.ndarray], a: float, n: int, b: float | None = None, n2: int | None = None) -> GridFunction:
        """Sample f on [−a, a] × [−b, b]; odd point counts keep x = 0 on the grid."""
        b = a if b is None else b
        x1 = np.linspace(-a, a, n)
        x2 = np.linspace(-b, b, n2 or n)
        X1, X2 = np.meshgrid(x1, x2)
        return cls(values=np.asarray(f(X1, X2), dtype=float), x1=x1, x2=x2)

    @property
    def a(self) -> float:
        return float(self.x1[-1])

    @property
    def spacings(self) -> tuple[float, float]:
        return float(self.x1[1] - self.x1[0]), float(self.x2[1] - self.x2[0])

    def row_convexity_defect(self) -> float:
        """Most negative second difference in x1 (0 when every row is convex)."""
        h1 = self.spacings[0]
        d2 = (self.values[:, 2:] - 2.0 * self.values[:, 1:-1] + self.values[:, :-2]) / h1**2
        return float(max(0.0, -d2.min()))

    def check_row_convexity(self, tol: float = 1e-10) -> None:
        defect = self.row_convexity_defect()
        if defect > tol * max(1.0, float(np.abs(self.values).max())):
            raise InvalidParameterError(f"Rows are not convex in x1 (second difference down to −{defect:.3e})")


@dataclass(frozen=True, eq=False)
class PLTFunction:
    """w*(p, x2) on the common p-window; `values[j, k]` = w*(p[k], x2[j])."""

    p: np.ndarray
    x2: np.ndarray
    values: np.ndarray

    @property
    def spacings(self) -> tuple[float, float]:
        return float(self.p[1] - self.p[0]), float(self.x2[1] - self.x2[0])

    def interface_row(self, tol: float = 1e-12) -> int:
        """Index of the x2 = 0 grid line."""
        j = int(np.argmin(np.abs(self.x2)))
        if abs(self.x2[j]) > tol * max(1.0, float(np.abs(self.x2).max())):
            raise InvalidParameterError("x2 = 0 is not a grid line")
        return j

    def as_grid(self) -> GridFunction:
        """View as a grid function of (p, x2), e.g. to transform back."""
        return GridFunction(values=self.values, x1=self.p, x2=self.x2)

    def convexity_defects(self) -> tuple[float, float]:
        """(most negative second difference in p, most positive in x2 on the upper half)."""
        hp, h2 = self.spacings
        dpp = (self.values[:, 2:] - 2.0 * self.values[:, 1:-1] + self.values[:, :-2]) / hp**2
        j0 = self.interface_row()
        up = self.values[j0:]
        d22 = (up[2:] - 2.0 * up[1:-1] + up[:-2]) / h2**2 if len(up) >= 3 else np.zeros(1)
        return float(max(0.0, -dpp.min())), float(max(0.0, d22.max()))
