import numpy as np
import pytest
from pytest_cases import parametrize

from common.config import config
from common.errors import InvalidParameterError
from potential.analytic import QuadraticPotential, quadratic, sheared_quadratic
from potential.discrete import DiscretePotential
from sections.centering import centered_section, section_contains, sublevel_polygon


def make_grid_potential(n: int = 12) -> DiscretePotential:
    s = np.linspace(-0.5, 0.5, n)
    seeds = np.array([(a, b) for a in s for b in s])
    return DiscretePotential(seeds, 0.5 * np.einsum("ij,ij->i", seeds, seeds))


# --- Sublevel tests ---


def test_sublevel_of_round_quadratic_is_a_disk():
    poly = sublevel_polygon(quadratic(1.0), [0.1, 0.2], 0.005, [0.1, 0.2])
    radii = np.linalg.norm(poly.vertices - [0.1, 0.2], axis=1)
    assert radii == pytest.approx(np.sqrt(0.01), rel=1e-9)


# --- Centering tests ---


@parametrize("x", [(0.0, 0.0), (0.3, -0.2)])
def test_quadratic_section_is_centered_at_gradient_slope(x):
    sec = centered_section(quadratic(1.0), x, 0.004)
    assert sec.slope == pytest.approx(np.asarray(x), abs=1e-6)
    assert sec.area == pytest.approx(2 * np.pi * 0.004, rel=1e-3)
    assert sec.eccentricity == pytest.approx(1.0, abs=1e-2)
    assert np.linalg.norm(sec.polygon.barycenter - x) <= config.centering_tol * sec.diameter


@parametrize("a", [2.0, 4.0, 9.0])
def test_quadratic_eccentricity_matches_axis_ratio(a):
    sec = centered_section(quadratic(a), (0.1, 0.1), 0.001)
    assert sec.eccentricity == pytest.approx(a, rel=1e-2)


def test_sheared_quadratic_section_stays_unit_area_per_height():
    sec = centered_section(sheared_quadratic(2.0, 3.0), (0.0, 0.0), 0.002)
    assert sec.area / 0.002 == pytest.approx(2 * np.pi, rel=1e-3)


@parametrize("a", [20.0, 100.0, 400.0])
def test_elongated_sublevel_keeps_its_area(a):
    poly = sublevel_polygon(quadratic(a), (0.0, 0.0), 0.001, (0.0, 0.0))
    assert poly.area == pytest.approx(2 * np.pi * 0.001, rel=1e-4)


def test_rotated_elongated_section_has_the_right_eccentricity():
    c, s = np.cos(0.4), np.sin(0.4)
    rot = np.array([[c, -s], [s, c]])
    u = QuadraticPotential(rot @ np.diag([150.0, 1.0 / 150.0]) @ rot.T)
    sec = centered_section(u, (0.05, -0.02), 0.002)
    assert sec.area == pytest.approx(2 * np.pi * 0.002, rel=1e-4)
    assert sec.eccentricity == pytest.approx(150.0, rel=1e-2)


def test_discrete_section_is_centered():
    u = make_grid_potential()
    x = np.array([0.03, -0.07])
    sec = centered_section(u, x, 0.01)
    assert np.linalg.norm(sec.polygon.barycenter - x) <= config.centering_tol * sec.diameter
    assert section_contains(sec, x[None, :])[0]


def test_affine_plane_passes_through_level():
    u = quadratic(1.0)
    sec = centered_section(u, (0.2, 0.1), 0.003)
    assert sec.affine([0.2, 0.1])[0] == pytest.approx(u.eval([0.2, 0.1]) + 0.003)


def test_nonpositive_height_is_rejected():
    with pytest.raises(InvalidParameterError):
        centered_section(quadratic(1.0), (0.0, 0.0), 0.0)
