import numpy as np
import pytest
from pytest_cases import parametrize

from common.errors import IncompatibleRangesError, InvalidParameterError
from legendre.fixtures import quadratic_fixture
from legendre.grid import GridFunction
from legendre.transform import discrete_conjugate, lower_envelope, plt, tangent_points

# --- Envelope tests ---


def test_envelope_of_convex_row_keeps_every_point():
    x = np.linspace(-1, 1, 11)
    assert lower_envelope(x, x**2).tolist() == list(range(11))


def test_envelope_drops_collinear_and_upper_points():
    x = np.linspace(-1, 1, 9)
    assert lower_envelope(x, np.abs(x)).tolist() == [0, 4, 8]
    w = x**2
    w[3] += 1.0
    assert 3 not in lower_envelope(x, w).tolist()


def test_kinked_row_is_not_smooth():
    x = np.linspace(-1, 1, 9)
    p, _, smooth = tangent_points(x, np.abs(x))
    assert not smooth
    assert np.all(np.diff(p) > 0)


# --- Transform tests ---


@parametrize("a", [0.5, 1.0, 2.0])
def test_quadratic_transform_is_exact(a):
    w = quadratic_fixture(a, n=41)
    wstar = plt(w)
    P, X2 = np.meshgrid(wstar.p, wstar.x2)
    exact = P**2 / (2 * a) - X2**2 / (2 * a)
    assert np.abs(wstar.values - exact).max() < 1e-10


def test_transform_is_thread_independent():
    w = quadratic_fixture(1.5, n=31)
    assert np.array_equal(plt(w, threads=1).values, plt(w, threads=4).values)


def test_discrete_conjugate_is_close_to_smooth_transform():
    w = quadratic_fixture(1.0, n=81)
    wstar = plt(w)
    discrete = discrete_conjugate(w, wstar.p)
    gap = discrete.values - wstar.values
    h = w.spacings[0]
    assert gap.max() <= 1e-12
    assert np.abs(gap).max() <= h**2


def test_nonconvex_rows_are_rejected():
    w = GridFunction.from_callable(lambda x1, x2: -(x1**2) + x2, 1.0, 11)
    with pytest.raises(InvalidParameterError):
        plt(w)


def test_disjoint_slope_ranges_are_rejected():
    w = GridFunction.from_callable(lambda x1, x2: 0.5 * x1**2 + 3.0 * x1 * x2, 1.0, 11)
    with pytest.raises(IncompatibleRangesError):
        plt(w)


def test_requested_p_grid_must_stay_in_window():
    w = quadratic_fixture(1.0, n=21)
    with pytest.raises(IncompatibleRangesError):
        plt(w, p_grid=np.linspace(-2.0, 2.0, 5))


# --- Grid tests ---


def test_grid_shape_mismatch_is_rejected():
    with pytest.raises(InvalidParameterError):
        GridFunction(values=np.zeros((3, 4)), x1=np.arange(3.0), x2=np.arange(4.0))


def test_even_grid_has_no_interface_row():
    wstar = plt(quadratic_fixture(1.0, n=20))
    with pytest.raises(InvalidParameterError):
        wstar.interface_row()
