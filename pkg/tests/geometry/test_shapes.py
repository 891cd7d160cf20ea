import numpy as np
import pytest
from pydantic import TypeAdapter, ValidationError
from pytest_cases import parametrize

from geometry.shapes import DiskShape, EllipseShape, HoleShape, PolygonShape, TargetShape

# --- Disk tests ---


def test_disk_polygon_is_inscribed():
    disk = DiskShape(center=(1.0, 2.0), radius=0.5)
    poly = disk.polygon(256)
    assert poly.area < disk.area
    assert poly.area == pytest.approx(disk.area, rel=2e-4)
    np.testing.assert_allclose(np.linalg.norm(poly.vertices - [1.0, 2.0], axis=1), 0.5)


def test_disk_distances_and_projection():
    disk = DiskShape(radius=1.0)
    pts = np.array([[2.0, 0.0], [0.0, 0.5]])
    np.testing.assert_allclose(disk.exterior_distance(pts), [1.0, 0.0])
    np.testing.assert_allclose(disk.interior_distance(pts), [0.0, 0.5])
    np.testing.assert_allclose(disk.closest_point(pts), [[1.0, 0.0], [0.0, 1.0]], atol=1e-15)


def test_disk_boundary_frame():
    disk = DiskShape(radius=2.0)
    y, n, speed, kappa = disk.boundary_frame(np.array([0.0, np.pi / 2]))
    np.testing.assert_allclose(y, [[2.0, 0.0], [0.0, 2.0]], atol=1e-15)
    np.testing.assert_allclose(n, [[1.0, 0.0], [0.0, 1.0]], atol=1e-15)
    np.testing.assert_allclose(speed, 2.0)
    np.testing.assert_allclose(kappa, 0.5)


# --- Ellipse tests ---


def make_ellipse(rotation: float = 0.0) -> EllipseShape:
    return EllipseShape(center=(0.2, -0.1), semi_axes=(0.4, 0.2), rotation=rotation)


@parametrize("rotation", [0.0, 0.3, np.pi / 2])
def test_ellipse_boundary_points_have_zero_residual(rotation):
    ell = make_ellipse(rotation)
    y = ell.boundary_point(np.linspace(0, 2 * np.pi, 17))
    assert ell.boundary_residual(y).max() < 1e-12


@parametrize("rotation", [0.0, 0.7])
def test_ellipse_exterior_projection_lands_on_boundary(rotation):
    ell = make_ellipse(rotation)
    pts = np.array([[1.0, 0.3], [-0.5, -0.8], [0.2, 0.5]])
    proj = ell.closest_point(pts)
    assert ell.boundary_residual(proj).max() < 1e-10
    np.testing.assert_allclose(ell.exterior_distance(pts), np.linalg.norm(pts - proj, axis=1), rtol=1e-10)


def test_ellipse_curvature_range():
    k_min, k_max = make_ellipse().curvature_range
    assert k_min == pytest.approx(0.2 / 0.16)
    assert k_max == pytest.approx(0.4 / 0.04)


def test_ellipse_frame_curvature_matches_range():
    _, _, _, kappa = make_ellipse(0.4).boundary_frame(np.linspace(0, 2 * np.pi, 400))
    k_min, k_max = make_ellipse().curvature_range
    assert kappa.min() == pytest.approx(k_min, rel=1e-3)
    assert kappa.max() == pytest.approx(k_max, rel=1e-3)


# --- Polygon and union tests ---


def test_polygon_shape_requires_three_vertices():
    with pytest.raises(ValidationError):
        PolygonShape(vertices=[(0, 0), (1, 0)])


def test_polygon_shape_interior_distance():
    sq = PolygonShape(vertices=[(-1, -1), (1, -1), (1, 1), (-1, 1)])
    np.testing.assert_allclose(sq.interior_distance([[0.0, 0.0], [0.5, 0.9]]), [1.0, 0.1])


def test_shape_unions_discriminate_on_type():
    hole = TypeAdapter(HoleShape).validate_python({"type": "ellipse", "semi_axes": [0.2, 0.1]})
    assert isinstance(hole, EllipseShape)
    target = TypeAdapter(TargetShape).validate_python({"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]})
    assert isinstance(target, PolygonShape)


def test_polygon_is_not_a_hole_shape():
    with pytest.raises(ValidationError):
        TypeAdapter(HoleShape).validate_python({"type": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]})
