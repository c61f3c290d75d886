import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridnav.geometry import (GridIndex, Pose2D, bezier_sample, cart_to_polar,
                              convex_hull, polar_to_cart, polygon_contains,
                              rasterize_region, resample_polyline, wrap_angle)
from reference import gift_wrap_hull, point_in_polygon, rasterize_oracle


class TestCartToPolar:
    def test_axis_cases(self):
        p = cart_to_polar([(1, 0, 0), (0, 1, 0)])
        assert p[0].rho == pytest.approx(1.0) and p[0].theta == 0.0 and p[0].phi == 0.0
        assert p[1].rho == pytest.approx(1.0)
        assert p[1].theta == pytest.approx(math.pi / 2)
        assert p[1].phi == 0.0

    def test_diagonal(self):
        (p,) = cart_to_polar([(1, 1, math.sqrt(2))])
        assert p.rho == pytest.approx(2.0)
        assert p.theta == pytest.approx(math.pi / 4)
        assert p.phi == pytest.approx(math.pi / 4)

    def test_origin(self):
        (p,) = cart_to_polar([(0, 0, 0)])
        assert p.rho == 0.0 and p.phi == 0.0

    @given(st.tuples(st.floats(-100, 100), st.floats(-100, 100), st.floats(-100, 100)))
    @settings(max_examples=200)
    def test_round_trip(self, xyz):
        (p,) = cart_to_polar([xyz])
        if p.rho <= 1e-12:
            return
        (back,) = polar_to_cart([p])
        for a, b in zip(xyz, back):
            assert abs(a - b) <= 1e-9 * max(1.0, p.rho)


class TestConvexHull:
    def test_square_with_center(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)]
        hull = convex_hull(pts)
        assert {tuple(v) for v in hull} == {(0, 0), (1, 0), (1, 1), (0, 1)}

    def test_two_points(self):
        hull = convex_hull([(0, 0), (2, 3)])
        assert hull.shape == (2, 2)

    def test_matches_gift_wrapping_on_random_points(self):
        rng = np.random.default_rng(42)
        pts = rng.uniform(-10, 10, size=(100, 2))
        ours = {tuple(v) for v in convex_hull(pts)}
        ref = set(gift_wrap_hull(pts))
        assert ours == ref

    def test_counter_clockwise_and_contains_all(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            pts = rng.uniform(-5, 5, size=(40, 2))
            hull = convex_hull(pts)
            n = hull.shape[0]
            for i in range(n):
                o, a, b = hull[i], hull[(i + 1) % n], hull[(i + 2) % n]
                cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
                assert cross > 0.0  # strictly convex, CCW
            inside = polygon_contains(hull, pts[:, 0], pts[:, 1], eps=1e-9)
            assert inside.all()

    def test_empty(self):
        assert convex_hull(np.empty((0, 2))).shape[0] == 0


class TestRasterizeRegion:
    def test_square_covering_four_centers(self):
        poly = np.array([(0.4, 0.4), (1.6, 0.4), (1.6, 1.6), (0.4, 1.6)])
        rows, cols = rasterize_region(poly, 10, 10)
        got = set(zip(rows.tolist(), cols.tolist()))
        assert got == rasterize_oracle(poly.tolist(), 10, 10)
        assert got == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_boundary_centers_included(self):
        # corners lie exactly on the four cell centers
        poly = np.array([(0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)])
        rows, cols = rasterize_region(poly, 10, 10)
        got = set(zip(rows.tolist(), cols.tolist()))
        assert got == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_fully_outside_grid(self):
        poly = np.array([(20.0, 20.0), (30.0, 20.0), (25.0, 30.0)])
        rows, cols = rasterize_region(poly, 10, 10)
        assert rows.shape[0] == 0

    def test_matches_winding_oracle_on_random_polygons(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            pts = rng.uniform(0, 12, size=(12, 2))
            ang = np.arctan2(pts[:, 1] - 6, pts[:, 0] - 6)
            poly = pts[np.argsort(ang)]  # star-shaped, possibly concave
            rows, cols = rasterize_region(poly, 12, 12)
            got = set(zip(rows.tolist(), cols.tolist()))
            assert got == rasterize_oracle([tuple(p) for p in poly], 12, 12)

    def test_empty_polygon(self):
        rows, cols = rasterize_region(np.empty((0, 2)), 5, 5)
        assert rows.shape[0] == 0


class TestBezier:
    def test_linear_midpoint(self):
        s = bezier_sample([(0, 0), (2, 4)], 3)
        assert s[1] == pytest.approx([1.0, 2.0])

    def test_quadratic_identity(self):
        p0, p1, p2 = np.array([0.0, 0.0]), np.array([2.0, 2.0]), np.array([4.0, 0.0])
        s = bezier_sample([p0, p1, p2], 3)
        assert s[1] == pytest.approx((p0 + 2 * p1 + p2) / 4.0)

    def test_endpoints_exact(self):
        ctrl = [(0.3, -1.7), (5.1, 2.2), (9.9, -3.3), (1.1, 4.4)]
        s = bezier_sample(ctrl, 17)
        assert tuple(s[0]) == ctrl[0]
        assert tuple(s[-1]) == ctrl[-1]

    def test_samples_inside_control_hull(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            ctrl = rng.uniform(-8, 8, size=(5, 2))
            s = bezier_sample(ctrl, 50)
            hull = convex_hull(ctrl)
            assert polygon_contains(hull, s[:, 0], s[:, 1], eps=1e-7).all()

    def test_degenerate_inputs(self):
        with pytest.raises(ValueError):
            bezier_sample([(0, 0)], 10)
        with pytest.raises(ValueError):
            bezier_sample([(0, 0), (1, 1)], 1)


class TestResamplePolyline:
    def test_spacing(self):
        pts = np.array([(0.0, 0.0), (10.0, 0.0)])
        out = resample_polyline(pts, 0.5)
        seg = np.linalg.norm(np.diff(out, axis=0), axis=1)
        assert np.all(seg <= 0.5 + 1e-12)
        assert out[0] == pytest.approx([0, 0]) and out[-1] == pytest.approx([10, 0])


class TestWrapAngle:
    @given(st.floats(-50, 50))
    @settings(max_examples=200)
    def test_range_and_equivalence(self, a):
        w = wrap_angle(a)
        assert -math.pi <= w < math.pi
        assert math.isclose(math.sin(w - a), 0.0, abs_tol=1e-9)


class TestPose2D:
    def test_yaw_normalized(self):
        assert Pose2D(0, 0, 3 * math.pi).yaw == pytest.approx(-math.pi)
        assert Pose2D(0, 0, math.pi / 2).yaw == pytest.approx(math.pi / 2)

    def test_distance(self):
        assert Pose2D(0, 0).distance_to(Pose2D(3, 4)) == pytest.approx(5.0)


class TestGridIndex:
    def test_ordering_and_equality(self):
        assert GridIndex(1, 2) == GridIndex(1, 2)
        assert GridIndex(1, 2) < GridIndex(2, 0)
