import numpy as np
import pytest
from pytest_cases import parametrize

from common.errors import DegenerateDirectionError, InvalidParameterError
from legendre.fixtures import half_plane_solution, half_plane_transform, perturbed_fixture, quadratic_fixture, sheared_fixture
from legendre.grid import GridFunction
from legendre.residuals import flux_from_linearity, hessian_entries, mixed_partial_identity, mixed_ratio, plt_residuals
from legendre.transform import plt

# --- Half-plane fixture tests ---


def test_half_plane_transform_matches_closed_form():
    wstar = plt(half_plane_solution(0.1, n=41))
    P, X2 = np.meshgrid(wstar.p, wstar.x2)
    assert np.abs(wstar.values - half_plane_transform(P, X2, 0.1)).max() < 1e-5


def test_half_plane_residuals_contract_under_refinement():
    coarse = plt_residuals(plt(half_plane_solution(0.1, n=21)))
    fine = plt_residuals(plt(half_plane_solution(0.1, n=41)))
    assert coarse.upper_laplacian / fine.upper_laplacian >= 3.5
    assert fine.lower_linearity < 1e-6


def test_flux_below_interface_vanishes():
    wstar = plt(half_plane_solution(0.1, n=41))
    assert np.abs(flux_from_linearity(wstar, 0.25)).max() < 1e-6


def test_flux_needs_a_line_below_the_interface():
    wstar = plt(quadratic_fixture(1.0, n=21))
    with pytest.raises(InvalidParameterError):
        flux_from_linearity(wstar, -0.5)


def test_residuals_need_lines_on_both_sides():
    wstar = plt(GridFunction.from_callable(lambda x1, x2: 0.5 * x1**2, 1.0, 11, n2=3))
    with pytest.raises(InvalidParameterError):
        plt_residuals(wstar)


# --- Mixed derivative tests ---


@parametrize("shear", [0.0, 0.5, 8.0])
def test_sheared_mixed_ratio_is_the_shear(shear):
    assert mixed_ratio(sheared_fixture(shear)) == pytest.approx(shear, rel=1e-8, abs=1e-8)


def test_hessian_entries_of_quadratic():
    w11, w12, w22 = hessian_entries(quadratic_fixture(2.0, n=21))
    assert w11 == pytest.approx(np.full(w11.shape, 2.0), rel=1e-9)
    assert w22 == pytest.approx(np.full(w22.shape, 0.5), rel=1e-9)
    assert np.abs(w12).max() < 1e-8


def test_mixed_ratio_in_a_box_region():
    w = perturbed_fixture(0.5)
    ratio = mixed_ratio(w, region=((-0.21, 0.21), (-0.21, 0.21)))
    # |w12| / w11 = |2c·x1| / (1 + 2c·x2) on the box
    assert ratio == pytest.approx(0.2 / 0.8, rel=1e-6)


def test_flat_direction_is_degenerate():
    w = GridFunction.from_callable(lambda x1, x2: 0.5 * x2**2, 1.0, 11)
    with pytest.raises(DegenerateDirectionError):
        mixed_ratio(w)


def test_mixed_partial_identity_on_sheared_quadratic():
    w = sheared_fixture(0.3, half_width=1.0, n=41)
    wstar = plt(w)
    assert mixed_partial_identity(w, wstar, region=((-1.0, 1.0), (-0.2, 0.2))) < 1e-6
