import numpy as np
import pytest

import sections.maximal
from common.config import config
from common.errors import CenteringError, OutsideDomainError
from geometry.polygon import ConvexPolygon
from potential.analytic import quadratic
from sections.maximal import hessian_proxy, max_height, polygon_in_domain


# --- Maximal height tests ---


def test_center_of_square_reaches_the_cap(square):
    maximal = max_height(quadratic(1.0), square, (0.0, 0.0))
    assert maximal.height == 0.01
    assert maximal.contact is None and maximal.hole is None


def test_height_is_limited_by_the_boundary(square):
    # disk sections of radius √(2h) touch x = 0.5 at h = 0.005
    maximal = max_height(quadratic(1.0), square, (0.4, 0.0))
    assert maximal.height == pytest.approx(0.005, rel=2e-2)
    assert maximal.contact == pytest.approx([0.5, 0.0], abs=2e-2)
    assert maximal.hole is None
    assert polygon_in_domain(maximal.section.polygon, square)


def test_contact_on_hole_reports_its_index(annulus, model):
    r = annulus.holes[0].shape.radius
    maximal = max_height(model, annulus, (r + 0.02, 0.0))
    assert maximal.hole == 0
    assert 0 < maximal.height < 0.01


def test_point_outside_domain_is_rejected(annulus, model):
    with pytest.raises(OutsideDomainError):
        max_height(model, annulus, (0.0, 0.0))


def test_hessian_proxy_grows_toward_the_hole(annulus, model):
    r = annulus.holes[0].shape.radius
    near = hessian_proxy(model, annulus, (r + 0.005, 0.0))
    far = hessian_proxy(model, annulus, (r + 0.05, 0.0))
    assert near > far >= 1.0


def test_polygon_swallowing_a_hole_is_not_contained(small_hole):
    c = small_hole.holes[0].polygon.barycenter
    big = ConvexPolygon.rectangle(c, [1.0, 0.0], (0.2, 0.2))
    assert not polygon_in_domain(big, small_hole)


# --- Height floor tests ---


def test_stalled_centering_falls_back_to_the_height_floor(square, monkeypatch):
    def stall(u, x, h, slope0=None, rays=None):
        raise CenteringError("stalled", best=np.array([0.01, 0.0]), residual=1.0)

    monkeypatch.setattr(sections.maximal, "centered_section", stall)
    maximal = max_height(quadratic(1.0), square, (0.1, 0.0))
    assert maximal.height == config.min_height
    assert maximal.section.slope == pytest.approx([0.01, 0.0])
    assert maximal.section.polygon.area > 0
