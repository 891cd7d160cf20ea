import numpy as np
import pytest
from pytest_cases import parametrize

from common.errors import DegenerateGeometryError
from geometry.polygon import ConvexPolygon
from geometry.rectangle import min_area_rectangle, ray_exit


def make_rotated_rectangle(angle: float, half=(2.0, 0.5), center=(0.3, -0.2)) -> ConvexPolygon:
    return ConvexPolygon.rectangle(center, (np.cos(angle), np.sin(angle)), half)


# --- Minimal rectangle tests ---


@parametrize("angle", [0.0, 0.3, 1.0, np.pi / 2 - 0.1])
def test_rectangle_is_its_own_box(angle):
    box = min_area_rectangle(make_rotated_rectangle(angle))
    assert box.long == pytest.approx(2.0)
    assert box.short == pytest.approx(0.5)
    assert box.eccentricity == pytest.approx(4.0)
    assert box.trapping == pytest.approx(1.0)
    np.testing.assert_allclose(box.center, [0.3, -0.2], atol=1e-12)
    assert abs(box.axis @ np.array([np.cos(angle), np.sin(angle)])) == pytest.approx(1.0)


def test_axis_is_normalized_to_the_right_half_plane():
    box = min_area_rectangle(make_rotated_rectangle(2.5))
    assert box.axis[0] >= 0


def test_triangle_box_traps_part_of_itself():
    tri = ConvexPolygon.from_vertices([(0, 0), (1, 0), (0, 1)])
    box = min_area_rectangle(tri)
    assert box.enclosing_area == pytest.approx(1.0)
    assert 0 < box.trapping < 1
    assert box.area >= tri.area


def test_disk_box_is_nearly_square():
    theta = 2 * np.pi * np.arange(128) / 128
    disk = ConvexPolygon(np.column_stack([np.cos(theta), np.sin(theta)]))
    box = min_area_rectangle(disk)
    assert box.eccentricity == pytest.approx(1.0, abs=1e-3)


def test_degenerate_polygon_raises():
    with pytest.raises(DegenerateGeometryError):
        min_area_rectangle(ConvexPolygon(np.array([[0, 0], [1, 0], [2, 0]])))


# --- Dilation tests ---


def test_dilation_factor_of_own_corners_is_one():
    box = min_area_rectangle(make_rotated_rectangle(0.4))
    assert box.dilation_factor(box.polygon().vertices) == pytest.approx(1.0)
    assert box.dilation_factor(box.polygon(3.0).vertices) == pytest.approx(3.0)


def test_dilation_factor_about_other_center():
    box = min_area_rectangle(make_rotated_rectangle(0.0, half=(1.0, 1.0), center=(0.0, 0.0)))
    assert box.dilation_factor([[2.0, 0.0]], about=[1.0, 0.0]) == pytest.approx(1.0)


def test_ray_exit_from_center_of_square():
    sq = ConvexPolygon.rectangle((0, 0), (1, 0), (1.0, 1.0))
    t = ray_exit(sq, np.zeros(2), np.array([[1.0, 0.0], [1.0, 1.0]]))
    np.testing.assert_allclose(t, [1.0, 1.0])
