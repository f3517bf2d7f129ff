import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from argvar.errors import (ContainmentError, CurveError, CuspError, DisconnectedError, DomainError,
                           ParseError, RegionError, UnsupportedShapeError)
from argvar.geom import (AnnulusSector, Curve, Disk, GridParams, HalfPlane, Polygon, Rectangle,
                         conformal_to_disk, curve_length, gap, gap_curve, intrinsic_diameter,
                         poincare_distance_disk, poincare_distance_halfplane, region_from_dict,
                         total_curvature)
from argvar.geom.curves import Analytic, Line
from argvar.holo import Affine, Const, Coord, Exp, Power, Product, Sum, eval_jet

TWO_PI = 2 * math.pi
in_disk = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0, 0.95), st.floats(0, TWO_PI))


def unit_square():
    return Curve.polygon([0, 1, 1 + 1j, 1j])


def analytic_circle(r=1.0, c=0.0, reparam=False):
    t = Power(Coord(), 2) if reparam else Coord()
    return Curve([Analytic(Sum((Const(c), Product((Const(r), Exp(Product((Const(TWO_PI * 1j), t))))))))])


class TestCurves:
    def test_length_examples(self):
        assert abs(curve_length(Curve.circle(0, 1)) - TWO_PI) <= 1e-9
        assert abs(curve_length(Curve.segment(0, 1 + 1j)) - math.sqrt(2)) <= 1e-12
        assert abs(curve_length(unit_square()) - 4) <= 1e-12

    @pytest.mark.parametrize("radius", [0.01, 1.0, 37.0])
    def test_circle_curvature(self, radius):
        assert abs(total_curvature(Curve.circle(1j, radius)) - TWO_PI) <= 1e-9

    def test_segment_and_square_curvature(self):
        assert total_curvature(Curve.segment(0, 3)) == 0
        assert abs(total_curvature(unit_square()) - TWO_PI) <= 1e-12

    def test_analytic_circle_matches_arc(self):
        c = analytic_circle(2.0, 1 + 1j)
        assert abs(curve_length(c) - 4 * math.pi) <= 1e-9
        assert abs(total_curvature(c) - TWO_PI) <= 1e-9

    def test_reparameterization_invariance(self):
        a, b = analytic_circle(1.5), analytic_circle(1.5, reparam=True)
        assert abs(curve_length(a) - curve_length(b)) <= 1e-8
        assert abs(total_curvature(a) - total_curvature(b)) <= 1e-8

    def test_cusp(self):
        with pytest.raises(CuspError):
            total_curvature(Curve.polygon([0, 1, 0.5], closed=False))

    def test_gap_between_segments(self):
        with pytest.raises(CurveError):
            Curve([Line(0, 1), Line(1.1, 2)])

    def test_zero_speed(self):
        with pytest.raises(CurveError):
            Curve([Analytic(Const(1.0))])

    def test_round_trip(self):
        c = Curve([Line(0, 1), Analytic(Affine(Exp(Coord()), 1j, 0.0))])
        d = Curve.from_dict(c.to_dict())
        assert np.allclose(c.sample(64), d.sample(64))


class TestRegions:
    @pytest.mark.parametrize("region", [
        Disk(1j, 2.0), Rectangle(-1 - 1j, 2 + 0.5j), Polygon((0, 2, 2 + 2j, 1 + 0.5j, 2j)),
        AnnulusSector(0.5, 1.0, 2.0, -1.0, 2.5), HalfPlane(0.3)])
    def test_round_trip(self, region):
        assert region_from_dict(region.to_dict()) == region

    def test_invalid(self):
        with pytest.raises(RegionError):
            Disk(0, -1)
        with pytest.raises(RegionError):
            Polygon((0, 1, 1j, 1 + 1j))  # bow tie
        with pytest.raises(RegionError):
            AnnulusSector(0, 2, 1, 0, 1)
        with pytest.raises(ParseError):
            region_from_dict({"shape": "disk"})

    def test_polygon_orientation_is_normalized(self):
        p = Polygon((0, 1j, 1 + 1j, 1))
        q = Polygon((0, 1, 1 + 1j, 1j))
        pts = np.array([0.5 + 0.5j, 2.0, -0.1j])
        assert np.array_equal(p.contains(pts), q.contains(pts))

    def test_shrink_stays_inside(self):
        for reg in (Disk(0, 1), Rectangle(0, 2 + 1j), Polygon((0, 2, 2 + 2j, 1 + 0.5j, 2j)),
                    AnnulusSector(0, 1, 2, 0, 3)):
            inner = reg.shrink(0.1)
            pts = inner.boundary().sample(400)
            assert np.all(reg.distance_to_boundary(pts) >= 0.1 - 1e-9)


class TestGap:
    def test_examples(self):
        assert gap(Disk(0, 0.3), Disk(0, 1)) == pytest.approx(0.7)
        assert gap(Disk(0.2 + 0.1j, 0.3), Disk(0, 1)) == pytest.approx(1 - abs(0.2 + 0.1j) - 0.3)
        sq = Rectangle(-0.5 - 0.5j, 0.5 + 0.5j)
        assert gap(sq, Rectangle(-1.5 - 1.5j, 1.5 + 1.5j)) == pytest.approx(1.0)

    def test_curve_examples(self):
        assert gap_curve(Curve.circle(0, 1), Disk(0, 2)) == pytest.approx(1.0, rel=1e-9)
        assert gap_curve(Curve.segment(-0.5, 0.5), Disk(0, 1)) == pytest.approx(0.5, rel=1e-9)
        assert gap_curve(Curve.circle(0, 0.9), Disk(0, 1)) == pytest.approx(0.1, rel=1e-6)

    def test_sampled_agrees_with_closed_form(self):
        # polygon inside an annulus sector has no closed form; compare against a disk-in-disk value
        K = Polygon(tuple(0.3 * np.exp(1j * np.linspace(0, TWO_PI, 64, endpoint=False))))
        got = gap(K, AnnulusSector(-2, 1.0, 3.0, -1.0, 1.0))
        assert got == pytest.approx(min(2 - 1 - 0.3, 3 - 2 - 0.3,
                                        2 * math.sin(1.0) - 0.3), abs=1e-3)

    def test_not_contained(self):
        with pytest.raises(ContainmentError):
            gap(Disk(0.5, 0.6), Disk(0, 1))
        with pytest.raises(ContainmentError):
            gap_curve(Curve.circle(0, 1.5), Disk(0, 1))

    @given(st.floats(0.05, 0.9), st.floats(0.01, 0.9))
    def test_monotone_under_shrinking(self, r, s):
        U = Disk(0.1, 1.0)
        assert gap(Disk(0, r * s), U) >= gap(Disk(0, r), U)


class TestIntrinsicDiameter:
    def test_convex_closed_form(self):
        assert intrinsic_diameter(Disk(0, 0.7)).value == pytest.approx(1.4)
        assert intrinsic_diameter(Rectangle(0, 3 + 4j)).value == pytest.approx(5.0)

    @pytest.mark.parametrize("K, exact", [(Disk(1, 0.7), 1.4), (Rectangle(0, 3 + 4j), 5.0)])
    def test_grid_agrees_with_euclidean(self, K, exact):
        grid = GridParams()
        est = intrinsic_diameter(K, grid, method="grid")
        assert abs(est.value - exact) <= 2 * est.h

    def test_l_shape(self):
        # arms [0,3]x[0,1] and [0,1]x[0,3]: geodesic from (3,0) to (0,3) bends at (1,1)
        L = Polygon((0, 3, 3 + 1j, 1 + 1j, 1 + 3j, 3j))
        est = intrinsic_diameter(L)
        exact = 2 * math.sqrt(5)
        assert abs(est.value - exact) <= 2 * L.scale / 48
        assert est.value > L.euclidean_diameter() + 0.1

    def test_annulus_sector_against_tangent_path(self):
        # outer corners joined by tangents to the inner circle plus the inner arc
        r, R, span = 1.0, 1.2, 1.5 * math.pi
        exact = 2 * math.sqrt(R * R - r * r) + r * (span - 2 * math.acos(r / R))
        est = intrinsic_diameter(AnnulusSector(0, r, R, 0, span))
        assert est.value >= r * span - 2 * est.h
        assert est.value == pytest.approx(exact, rel=0.01)

    def test_annulus_sector_against_finer_grid(self):
        K = AnnulusSector(0, 1.0, 1.2, 0, 1.5 * math.pi)
        coarse = intrinsic_diameter(K, GridParams(h=0.04))
        fine = intrinsic_diameter(K, GridParams(h=0.01))
        assert abs(coarse.value - fine.value) <= 2 * 0.04

    def test_disconnected(self):
        with pytest.raises(DisconnectedError):
            intrinsic_diameter(Polygon((0, 2, 2 + 1j, 1.0001 + 0.01j, 0.9999 + 0.01j, 1j)), GridParams(h=0.2))

    def test_grid_params_validation(self):
        with pytest.raises(RegionError):
            GridParams(h=0)
        with pytest.raises(RegionError):
            GridParams(connectivity=12)


class TestPoincare:
    def test_examples(self):
        assert poincare_distance_disk(0, 0) == 0
        for x in (0.1, 0.5, 0.99):
            assert poincare_distance_disk(0, x) == pytest.approx(math.log((1 + x) / (1 - x)), rel=1e-12)
        assert poincare_distance_halfplane(0) == 0
        assert poincare_distance_halfplane(-(math.e - 1)) == pytest.approx(1.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            poincare_distance_disk(0, 1.0)
        with pytest.raises(DomainError):
            poincare_distance_halfplane(1.0)

    def test_symmetry_on_random_pairs(self):
        rng = np.random.default_rng(0)
        a = np.sqrt(rng.uniform(0, 0.99, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))
        b = np.sqrt(rng.uniform(0, 0.99, 100)) * np.exp(2j * np.pi * rng.uniform(size=100))
        for x, y in zip(a, b):
            assert abs(poincare_distance_disk(x, y) - poincare_distance_disk(y, x)) <= 1e-12

    def test_halfplane_matches_disk_on_random_pairs(self):
        rng = np.random.default_rng(1)
        phi = conformal_to_disk(HalfPlane(1.0), 0.0)
        w = 1.0 - rng.exponential(1.0, (100, 2)) + 1j * rng.normal(0, 2, (100, 2))
        for w1, w2 in w:
            ref = poincare_distance_disk(phi(w1), phi(w2))
            assert abs(poincare_distance_halfplane(w1, 1.0, w2) - ref) <= 1e-9 * max(1.0, ref)

    @given(in_disk, in_disk)
    def test_symmetry(self, a, b):
        assert abs(poincare_distance_disk(a, b) - poincare_distance_disk(b, a)) <= 1e-12 * (
            1 + poincare_distance_disk(a, b))

    @given(in_disk, in_disk, in_disk)
    def test_triangle_inequality(self, a, b, c):
        d = poincare_distance_disk
        assert d(a, c) <= d(a, b) + d(b, c) + 1e-12

    @given(st.floats(-5, 0.9), st.floats(-5, 5), st.floats(-5, 0.9), st.floats(-5, 5))
    def test_halfplane_matches_disk_under_catalog_map(self, x1, y1, x2, y2):
        phi = conformal_to_disk(HalfPlane(1.0), 0.0)
        w1, w2 = complex(x1, y1), complex(x2, y2)
        got = poincare_distance_halfplane(w1, 1.0, w2)
        ref = poincare_distance_disk(phi(w1), phi(w2))
        assert abs(got - ref) <= 1e-9 * (1 + ref)

    def test_proposition_bound_grid(self):
        for R in np.linspace(0.5, 5.0, 20):
            for r in np.linspace(0.01, 0.99, 20) * R:
                if R - r < 0.05:
                    continue
                rho = poincare_distance_disk(-r / R, r / R)
                assert rho == pytest.approx(4 * math.atanh(r / R), rel=1e-12)
                assert rho <= 2 * (2 * r) / (R - r)


class TestConformal:
    def test_identity_and_scaling(self):
        for p in (0.3, -0.2 + 0.5j):
            assert conformal_to_disk(Disk(0, 1), 0)(p) == pytest.approx(p)
            assert conformal_to_disk(Disk(0, 2), 0)(p) == pytest.approx(p / 2)

    def test_automorphism(self):
        phi = conformal_to_disk(Disk(0, 1), 0.5)
        for p in (0.3, -0.2 + 0.5j):
            assert phi(p) == pytest.approx((p - 0.5) / (1 - p / 2))
        assert abs(phi(0.5)) <= 1e-15
        assert np.allclose(np.abs(phi(np.exp(1j * np.linspace(0, 6, 50)))), 1, atol=1e-9)

    def test_round_trip_200_samples(self):
        rng = np.random.default_rng(2)
        U = Disk(0.5 - 1j, 1.5)
        phi = conformal_to_disk(U, 0.2 - 0.8j)
        z = 0.5 - 1j + 1.5 * np.sqrt(rng.uniform(0, 0.98, 200)) * np.exp(2j * np.pi * rng.uniform(size=200))
        assert np.max(np.abs(phi.inverse(phi(z)) - z)) <= 1e-9

    @given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
           st.floats(0.2, 3), in_disk, st.lists(in_disk, min_size=1, max_size=20))
    def test_disk_map_invariants(self, c, R, b, samples):
        U = Disk(c, R)
        phi = conformal_to_disk(U, c + R * b)
        z = c + R * np.array(samples)
        w = phi(z)
        assert abs(phi(c + R * b)) <= 1e-12
        assert np.all(np.abs(w) < 1 + 1e-12)
        assert np.allclose(phi.inverse(w), z, atol=1e-9 * (1 + abs(c) + R))

    @given(st.floats(-3, 3), st.floats(0.1, 4), st.floats(-3, 3))
    def test_halfplane_map(self, B, depth, y):
        b = complex(B - depth, y)
        phi = conformal_to_disk(HalfPlane(B), b)
        assert abs(phi(b)) <= 1e-12
        edge = B + 1j * np.linspace(-20, 20, 41)
        assert np.allclose(np.abs(phi(edge)), 1, atol=1e-9)

    def test_koebe_ratio_on_catalog(self):
        # |phi''/phi'| <= 2/eps at points eps-deep inside
        phi = conformal_to_disk(Disk(0.3, 1.7), 0.9 + 0.4j)
        for p in 0.3 + 1.5 * np.exp(1j * np.linspace(0, TWO_PI, 40)) * np.linspace(0.1, 0.99, 40):
            j = eval_jet(phi.forward, p)
            eps = 1.7 - abs(p - 0.3)
            assert abs(j.d2 / j.d1) <= 2 / eps * (1 + 1e-12)

    def test_errors(self):
        with pytest.raises(ContainmentError):
            conformal_to_disk(Disk(0, 1), 2.0)
        with pytest.raises(UnsupportedShapeError):
            conformal_to_disk(Rectangle(0, 1 + 1j), 0.5 + 0.5j)
