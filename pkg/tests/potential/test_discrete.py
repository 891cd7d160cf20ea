import numpy as np
import pytest

from common.errors import InvalidParameterError
from potential.discrete import DiscretePotential


def make_potential() -> DiscretePotential:
    seeds = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    return DiscretePotential(seeds, [0.0, 0.5, 0.5])


# --- Evaluation tests ---


def test_values_are_max_of_affine_pieces():
    u = make_potential()
    np.testing.assert_allclose(u.values(np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])), [0.0, 1.5, 1.5])


def test_subgradient_is_attaining_seed():
    u = make_potential()
    np.testing.assert_allclose(u.subgradient([2.0, 0.0]), [1.0, 0.0])
    assert u.locate([[0.1, 0.1], [0.0, 2.0]]).tolist() == [0, 2]


def test_ties_resolve_to_lowest_index():
    u = DiscretePotential([(0.0, 0.0), (1.0, 0.0)], [0.0, 0.5])
    assert u.locate([0.5, 0.0]).tolist() == [0]


def test_gradient_hull_is_seed_hull():
    assert make_potential().gradient_hull().area == pytest.approx(0.5)


def test_mismatched_lengths_raise():
    with pytest.raises(InvalidParameterError):
        DiscretePotential([(0.0, 0.0)], [0.0, 1.0])


# --- Serialization tests ---


def test_save_and_load(tmp_path):
    u = make_potential()
    u.save(tmp_path / "potential.json")
    loaded = DiscretePotential.load(tmp_path / "potential.json")
    np.testing.assert_array_equal(loaded.seeds, u.seeds)
    np.testing.assert_array_equal(loaded.weights, u.weights)
