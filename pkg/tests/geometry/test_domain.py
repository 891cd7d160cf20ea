import numpy as np
import pytest

from common.errors import DomainValidationError, NotOnBoundaryError, OutsideDomainError
from geometry.domain import (
    HoledDomain,
    area_in_domain,
    closest_boundary_point,
    distance_field,
    domain_distance,
    dump_domain,
    hole_at,
    load_domain,
    point_in_domain,
    segment_domain_clip,
    tangent_data,
)
from geometry.polygon import ConvexPolygon
from geometry.shapes import DiskShape, EllipseShape, PolygonShape

# --- Construction tests ---


def test_annulus_has_unit_area(annulus):
    assert annulus.area == pytest.approx(1.0, abs=1e-12)
    assert annulus.holes[0].shape.radius == 0.3
    assert annulus.outer_shape.radius == pytest.approx(np.sqrt(1.0 / np.pi + 0.09), rel=1e-15)


def test_annulus_radii_match_the_model(annulus, model):
    assert model.r == annulus.holes[0].shape.radius
    assert model.R == pytest.approx(annulus.outer_shape.radius, rel=1e-15)
    assert annulus.polygon_area < annulus.area
    assert annulus.polygon_area == pytest.approx(1.0, rel=2e-4)


def test_normalization_uses_the_analytic_area():
    dom = HoledDomain.build(DiskShape(radius=1.0), [DiskShape(radius=0.2)], delta=0.1)
    scale = dom.outer_shape.radius
    assert scale == pytest.approx(1.0 / np.sqrt(np.pi * 0.96), rel=1e-14)
    assert dom.holes[0].shape.radius == pytest.approx(0.2 * scale, rel=1e-14)


def test_build_normalizes_area(small_hole):
    assert small_hole.area == pytest.approx(1.0, abs=1e-12)


def test_hole_too_close_to_outer_boundary_is_rejected():
    with pytest.raises(DomainValidationError):
        HoledDomain.build(DiskShape(radius=1.0), [DiskShape(center=(0.7, 0.0), radius=0.25)], delta=0.2)


def test_overlapping_holes_are_rejected():
    holes = [DiskShape(center=(-0.1, 0.0), radius=0.15), DiskShape(center=(0.1, 0.0), radius=0.15)]
    with pytest.raises(DomainValidationError):
        HoledDomain.build(DiskShape(radius=1.0), holes, delta=0.05)


def test_too_curved_hole_is_rejected():
    with pytest.raises(DomainValidationError):
        HoledDomain.build(DiskShape(radius=1.0), [DiskShape(radius=0.01)], delta=0.2)


def test_domain_json_round_trip_keeps_geometry(tmp_path, small_hole):
    path = tmp_path / "domain.json"
    dump_domain(small_hole, path)
    loaded = load_domain(path)
    assert loaded.area == pytest.approx(small_hole.area, abs=1e-12)
    assert loaded.holes[0].shape.center == pytest.approx(small_hole.holes[0].shape.center, rel=1e-12)


def test_ellipse_hole_domain_builds():
    dom = HoledDomain.build(
        PolygonShape(vertices=[(-1, -1), (1, -1), (1, 1), (-1, 1)]),
        [EllipseShape(semi_axes=(0.3, 0.2), rotation=0.5)],
        delta=0.1,
    )
    assert dom.area == pytest.approx(1.0, abs=1e-12)


# --- Membership and distance tests ---


def test_point_in_domain(annulus):
    assert point_in_domain(annulus, [0.45, 0.0]) is True
    assert point_in_domain(annulus, [0.0, 0.0]) is False
    assert point_in_domain(annulus, [1.0, 0.0]) is False


def test_distance_field_near_hole(annulus):
    r = annulus.holes[0].shape.radius
    d = distance_field(annulus, [[r + 0.01, 0.0], [0.0, 0.0]])
    assert d[0] == pytest.approx(0.01)
    assert d[1] == 0.0


def test_domain_distance_outside_raises(annulus):
    with pytest.raises(OutsideDomainError):
        domain_distance(annulus, [0.0, 0.0])


def test_closest_boundary_point_hole_and_outer(annulus):
    r = annulus.holes[0].shape.radius
    big = annulus.outer_shape.radius
    point, index = closest_boundary_point(annulus, [r + 0.02, 0.0])
    assert index == 0
    np.testing.assert_allclose(point, [r, 0.0], atol=1e-14)
    point, index = closest_boundary_point(annulus, [0.0, big - 0.01])
    assert index is None
    np.testing.assert_allclose(point, [0.0, big], atol=1e-14)


def test_hole_at_and_tangent_data(annulus):
    r = annulus.holes[0].shape.radius
    assert hole_at(annulus, [0.0, r]) == 0
    tangent, normal = tangent_data(annulus, [0.0, r])
    np.testing.assert_allclose(normal, [0.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(tangent, [-1.0, 0.0], atol=1e-14)
    with pytest.raises(NotOnBoundaryError):
        hole_at(annulus, [0.0, r + 0.1])


# --- Area and segment tests ---


def test_area_in_domain_subtracts_holes(annulus):
    assert area_in_domain(annulus.outer, annulus) == pytest.approx(1.0, abs=1e-12)
    assert area_in_domain(annulus.holes[0].polygon, annulus) == pytest.approx(0.0, abs=1e-12)


def test_segment_crossing_hole_splits_in_two(annulus):
    big = annulus.outer_shape.radius
    intervals = segment_domain_clip(annulus, [-big, 0.0], [big, 0.0])
    assert len(intervals) == 2
    total = sum(t1 - t0 for t0, t1 in intervals) * 2 * big
    assert total == pytest.approx(2 * (big - annulus.holes[0].shape.radius), rel=1e-3)


def test_polygon_in_hole_has_no_domain_area(annulus):
    tiny = ConvexPolygon.rectangle((0.0, 0.0), (1.0, 0.0), (0.05, 0.05))
    assert area_in_domain(tiny, annulus) == pytest.approx(0.0, abs=1e-14)


# --- Target containment tests ---


def test_target_inside_the_delta_disk_is_accepted(annulus):
    annulus.check_target(DiskShape(radius=1.0 / np.sqrt(np.pi)).polygon(64))


def test_target_outside_the_delta_disk_is_rejected(annulus):
    far = ConvexPolygon(np.array([[3.0, 0.0], [4.0, 0.0], [4.0, 1.0], [3.0, 1.0]]))
    with pytest.raises(DomainValidationError, match="outside the disk of radius"):
        annulus.check_target(far)
