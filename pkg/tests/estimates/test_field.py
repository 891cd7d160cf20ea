import numpy as np
import pytest

from common.config import config
from estimates.field import bulk_nodes, hessian_field, ring_count, tube_nodes, tube_polygon, tube_width
from estimates.norms import oracle_w2p, w2p_estimate
from geometry.domain import point_in_domain
from potential.discrete import DiscretePotential

# --- Quadrature tests ---


def test_tube_weights_integrate_the_tube_area(annulus):
    hole = annulus.holes[0]
    r, width, rings = hole.shape.radius, tube_width(annulus), 8
    _, s, weights, ring = tube_nodes(hole, width, rings, angular=64, gauss=4)
    inner = r + width * 2.0**-rings
    assert weights.sum() == pytest.approx(np.pi * ((r + width) ** 2 - inner**2), rel=1e-12)
    assert s.min() > width * 2.0**-rings and s.max() < width
    assert set(ring.tolist()) == set(range(rings))


def test_bulk_nodes_avoid_tubes_and_holes(annulus):
    width = tube_width(annulus)
    points, weights = bulk_nodes(annulus, width, 0.05)
    assert point_in_domain(annulus, points).all()
    r = annulus.holes[0].shape.radius
    assert np.linalg.norm(points, axis=1).min() > r
    assert np.all(weights > 0)


def test_bulk_nodes_keep_all_of_the_cell_mass(annulus):
    # a thin tube under coarse cells leaves straddling cells whose barycenter can sit in the hole
    width = 1e-3
    points, weights = bulk_nodes(annulus, width, 0.1)
    tube = tube_polygon(annulus.holes[0], width)
    assert weights.sum() == pytest.approx(annulus.outer.area - tube.area, rel=1e-9)
    assert point_in_domain(annulus, points).all()


def test_ring_count_by_potential_kind(annulus, model, rng):
    assert ring_count(model, annulus, grid_level=3) == config.ring_base + 4
    seeds = rng.uniform(-0.5, 0.5, size=(1000, 2))
    discrete = DiscretePotential(seeds, np.zeros(1000))
    assert ring_count(discrete, annulus) == int(np.floor(np.log2(tube_width(annulus) * 1000 / 10.0)))


# --- Field tests ---


@pytest.mark.slow
def test_model_field_weights_cover_the_domain(model, annulus):
    samples = hessian_field(model, annulus, grid_level=0)
    assert sum(s.weight for s in samples) == pytest.approx(1.0, abs=2e-3)
    assert all(s.d >= 0 for s in samples)
    assert all(np.isfinite(s.hessian_proxy) and s.hessian_proxy >= 1.0 for s in samples)


@pytest.mark.slow
def test_model_w2p_matches_oracle(model, annulus):
    samples = hessian_field(model, annulus, grid_level=1)
    estimate = w2p_estimate(samples, 1.5)
    assert estimate.value == pytest.approx(oracle_w2p(model.r, model.R, 1.5), rel=3e-2)
    assert abs(estimate.last_relative_change) < 0.02
