import numpy as np
import pytest
from pytest_cases import parametrize

from potential.analytic import quadratic
from sections.centering import centered_section
from sections.diagnostics import boundary_tangent, classify, diagnostics, tangent_length
from sections.schemas import ClassifierThresholds, SectionCase, SectionDiagnostics


def make_diagnostics(**overrides) -> SectionDiagnostics:
    values = {
        "exterior_fraction": 0.0,
        "tangent_length_ratio": 0.0,
        "eccentricity": 50.0,
        "sup_distance": 0.01,
        "long": 0.1,
        "short": 0.002,
        "height": 0.001,
    }
    values.update(overrides)
    return SectionDiagnostics(**values)


# --- Classifier tests ---


@parametrize(
    "overrides,expected",
    [
        ({"exterior_fraction": 0.2, "tangent_length_ratio": 0.5}, SectionCase.MODEL_GEOMETRY),
        ({"exterior_fraction": 0.2, "tangent_length_ratio": 0.5, "eccentricity": 2.0}, SectionCase.MODEL_GEOMETRY),
        ({"eccentricity": 5.0}, SectionCase.BOUNDED),
        ({"exterior_fraction": 0.2, "tangent_length_ratio": 0.01, "eccentricity": 5.0}, SectionCase.BOUNDED),
        ({}, SectionCase.INTERIOR_LIKE),
        ({"exterior_fraction": 0.01, "tangent_length_ratio": 0.9}, SectionCase.INTERIOR_LIKE),
        ({"exterior_fraction": 0.2, "tangent_length_ratio": 0.01}, SectionCase.TRANSVERSAL),
    ],
)
def test_classify_precedence(overrides, expected):
    assert classify(make_diagnostics(**overrides)) == expected


def test_classify_uses_given_thresholds():
    diag = make_diagnostics(eccentricity=30.0)
    assert classify(diag) == SectionCase.INTERIOR_LIKE
    assert classify(diag, ClassifierThresholds(eta_floor=40.0)) == SectionCase.BOUNDED


def test_model_geometry_ratio():
    diag = make_diagnostics(long=0.1, short=0.002, sup_distance=0.01)
    assert diag.model_geometry_ratio == pytest.approx((0.01 + 0.01) / 0.002)


# --- Measurement tests ---


def test_interior_section_has_no_exterior_mass(square):
    sec = centered_section(quadratic(1.0), (0.0, 0.0), 0.002)
    diag = diagnostics(sec, square, ClassifierThresholds())
    assert diag.exterior_fraction == pytest.approx(0.0, abs=1e-12)
    assert diag.tangent_length_ratio == 0.0
    assert diag.case == SectionCase.BOUNDED
    assert 0.4 < diag.sup_distance <= 0.5


def test_boundary_section_straddles(square):
    sec = centered_section(quadratic(1.0), (0.5, 0.0), 0.002)
    diag = diagnostics(sec, square)
    assert diag.exterior_fraction == pytest.approx(0.5, abs=1e-2)
    assert diag.case is None


def test_tangent_of_hole_is_perpendicular_to_radius(annulus):
    r = annulus.holes[0].shape.radius
    t = boundary_tangent(annulus, (0.0, r + 0.01))
    assert abs(t @ np.array([0.0, 1.0])) < 1e-12
    assert np.linalg.norm(t) == pytest.approx(1.0)


def test_tangent_length_along_long_axis_is_full_length():
    sec = centered_section(quadratic(4.0), (0.0, 0.0), 0.001)
    length = tangent_length(sec, sec.box.axis)
    assert length == pytest.approx(2 * sec.box.long, rel=1e-9)
