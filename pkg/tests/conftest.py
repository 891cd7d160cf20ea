from pathlib import Path

import numpy as np
import pytest

from geometry.domain import HoledDomain
from geometry.polygon import ConvexPolygon
from geometry.shapes import DiskShape, PolygonShape
from potential.analytic import ModelPotential

UNIT_SQUARE = [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]


@pytest.fixture
def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"


@pytest.fixture
def configs_dir() -> Path:
    return Path(__file__).parent.parent / "configs"


@pytest.fixture
def unit_square() -> ConvexPolygon:
    return ConvexPolygon.from_vertices(UNIT_SQUARE)


@pytest.fixture
def annulus() -> HoledDomain:
    return HoledDomain.annulus(0.3)


@pytest.fixture
def model(annulus) -> ModelPotential:
    return ModelPotential(annulus.holes[0].shape.radius)


@pytest.fixture
def square() -> HoledDomain:
    return HoledDomain.build(PolygonShape(vertices=UNIT_SQUARE), [], delta=0.5)


@pytest.fixture
def small_hole() -> HoledDomain:
    return HoledDomain.build(
        PolygonShape(vertices=UNIT_SQUARE), [DiskShape(center=(0.1, 0.05), radius=0.05)], delta=0.045
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)
