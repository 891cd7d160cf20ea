"""
Discrete Brenier potential u(x) = max_i (x·y_i − ψ_i).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field

from common.errors import InvalidParameterError
from geometry.polygon import ConvexPolygon
from potential.base import ConvexPotential

_CHUNK_ENTRIES = 4_000_000


class DiscretePotentialRecord(BaseModel):
    """Serialized form: {"seeds": [[x, y], ...], "weights": [...]}."""

    seeds: list[tuple[float, float]] = Field(..., description="Target seeds y_i")
    weights: list[float] = Field(..., description="Dual weights ψ_i")


class DiscretePotential(ConvexPotential):
    is_discrete = True

    def __init__(self, seeds, weights):
        seeds = np.array(seeds, dtype=float).reshape(-1, 2)
        weights = np.array(weights, dtype=float).ravel()
        if len(seeds) == 0 or len(seeds) != len(weights):
            raise InvalidParameterError(f"Need matching non-empty seeds/weights, got {len(seeds)} and {len(weights)}")
        seeds.setflags(write=False)
        weights.setflags(write=False)
        self.seeds = seeds
        self.weights = weights

    def __len__(self) -> int:
        return len(self.seeds)

    def _scores(self, points: np.ndarray):
        rows = max(1, _CHUNK_ENTRIES // len(self.seeds))
        for start in range(0, len(points), rows):
            yield points[start : start + rows] @ self.seeds.T - self.weights

    def values(self, points: np.ndarray) -> np.ndarray:
        return np.concatenate([s.max(axis=1) for s in self._scores(points)])

    def locate(self, points) -> np.ndarray:
        """Index of the attaining seed (lowest index on ties)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.concatenate([s.argmax(axis=1) for s in self._scores(pts)])

    def subgradients(self, points: np.ndarray) -> np.ndarray:
        return self.seeds[self.locate(points)]

    def gradient_hull(self) -> ConvexPolygon:
        return ConvexPolygon.from_points(self.seeds)

    # --- Serialization ---

    def to_record(self) -> DiscretePotentialRecord:
        return DiscretePotentialRecord(seeds=[tuple(s) for s in self.seeds.tolist()], weights=self.weights.tolist())

    @classmethod
    def from_record(cls, record: DiscretePotentialRecord) -> DiscretePotential:
        return cls(record.seeds, record.weights)

    def to_json(self) -> str:
        return self.to_record().model_dump_json()

    @classmethod
    def from_json(cls, text: str) -> DiscretePotential:
        return cls.from_record(DiscretePotentialRecord.model_validate_json(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> DiscretePotential:
        return cls.from_json(Path(path).read_text())
