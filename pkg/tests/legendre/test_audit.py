import pytest

from common.errors import InvalidParameterError
from legendre.audit import Fixture, build_fixture, plt_audit

# --- Fixture tests ---


def test_fixture_grid_must_be_odd():
    with pytest.raises(InvalidParameterError):
        build_fixture(Fixture.QUADRATIC, 40)
    with pytest.raises(InvalidParameterError):
        build_fixture(Fixture.QUADRATIC, 5)


# --- Audit tests ---


def test_quadratic_audit_is_exact():
    report = plt_audit(Fixture.QUADRATIC, n=21)
    assert report.transform_error < 1e-10
    assert report.mixed_ratio < 1e-8
    assert report.errors == []


def test_half_plane_audit_contracts():
    report = plt_audit(Fixture.HALF_PLANE, n=21)
    assert report.errors == []
    assert report.transform_error < 1e-4
    assert report.contraction >= 3.5
    assert report.refined_residuals.upper_laplacian < report.residuals.upper_laplacian


def test_large_shear_keeps_the_mixed_ratio():
    report = plt_audit(Fixture.SHEARED, n=21, parameter=8.0)
    assert report.mixed_ratio == pytest.approx(8.0, rel=1e-8)
    assert report.errors and report.errors[0].startswith("transform: IncompatibleRangesError")
    assert report.transform_error is None


def test_perturbed_audit_has_no_exact_transform():
    report = plt_audit("perturbed", n=21)
    assert report.fixture == Fixture.PERTURBED
    assert report.transform_error is None
    assert report.residuals is not None
