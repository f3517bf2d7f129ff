import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from argvar.cover import (CoverSpec, SurfaceRegion, lift_curve, lifted_annulus_sector, pi_gap,
                          surface_intrinsic_diameter)
from argvar.errors import BranchPointError, DisconnectedError, RegionError
from argvar.geom import Curve, Disk, GridParams, Rectangle, gap, intrinsic_diameter

LOG = CoverSpec("log", 0j)
TWO_PI = 2 * math.pi


def sector_path(r, R, span):
    """Length of the shortest path between the outer corners of a thin annulus sector."""
    return 2 * math.sqrt(R * R - r * r) + r * (span - 2 * math.acos(r / R))


class TestCoverSpec:
    def test_validation(self):
        with pytest.raises(RegionError):
            CoverSpec("sqrt")
        with pytest.raises(RegionError):
            CoverSpec("root", 0, order=1)
        with pytest.raises(RegionError):
            CoverSpec("log", 0, order=3)

    def test_round_trip(self):
        for c in (LOG, CoverSpec("root", 1 + 1j, order=3, cut_angle=0.5), CoverSpec()):
            assert CoverSpec.from_dict(c.to_dict()) == c

    def test_coordinate_on_sheets(self):
        z = -1 + 0.5j
        w0 = LOG.coordinate_jets(z, 0)[0]
        w1 = LOG.coordinate_jets(z, 1)[0]
        assert w0 == pytest.approx(np.log(z))
        assert w1 - w0 == pytest.approx(TWO_PI * 1j)
        root = CoverSpec("root", 0, order=2)
        assert root.coordinate_jets(z, 1)[0] == pytest.approx(-np.sqrt(z))

    def test_coordinate_expr_matches_jets(self):
        c = CoverSpec("log", 0.5j, cut_angle=1.0)
        for k in (-1, 0, 2):
            for z in (2.0, -1 - 1j, 0.3 + 3j):
                assert complex(c.coordinate_expr(k)(z)) == pytest.approx(complex(c.coordinate_jets(z, k)[0]))


class TestLiftCurve:
    def test_loop_around_branch_point(self):
        sc = lift_curve(Curve.circle(0, 1), LOG)
        assert sc.end_sheet == 1
        assert len(sc.transitions) == 1
        assert sc.transitions[0][2:] == (0, 1)

    def test_two_turns(self):
        circle = Curve.circle(0, 1, turns=2)
        assert lift_curve(circle, LOG).end_sheet == 2
        assert lift_curve(circle, CoverSpec("root", 0, order=2)).end_sheet == 0

    def test_loop_not_enclosing(self):
        assert lift_curve(Curve.circle(3, 1), LOG, start_sheet=4).end_sheet == 4
        # crosses the cut twice, in opposite directions
        sc = lift_curve(Curve.circle(-2, 1, start_angle=0.5), LOG)
        assert sc.end_sheet == 0
        assert [t[2:] for t in sc.transitions] in ([(0, -1), (-1, 0)], [(0, 1), (1, 0)])

    def test_crossing_segment(self):
        sc = lift_curve(Curve.segment(-1 + 1j, -1 - 1j), LOG)
        (i, t, k0, k1), = sc.transitions
        assert (k0, k1) == (0, 1)
        assert t == pytest.approx(0.5, abs=1e-12)

    @given(st.integers(-3, 3), st.integers(1, 3), st.floats(0.2, 3))
    def test_monodromy_reversal(self, k0, turns, r):
        sc = lift_curve(Curve.circle(0, r, turns=turns), LOG, start_sheet=k0)
        assert sc.end_sheet == k0 + turns
        assert sc.reversed().end_sheet == k0

    def test_branch_point(self):
        with pytest.raises(BranchPointError):
            lift_curve(Curve.segment(-1, 1), LOG)


class TestPiGap:
    def test_trivial_cover_reduces_to_gap(self):
        U = SurfaceRegion(CoverSpec(), [(0, Disk(0, 1))])
        for K in (Disk(0.2, 0.3), Curve.circle(-0.1j, 0.5)):
            planar = gap(K, Disk(0, 1)) if not isinstance(K, Curve) else 0.4
            assert pi_gap(K, U) == pytest.approx(planar, rel=1e-6)

    def test_circle_in_lifted_annulus(self):
        U = lifted_annulus_sector(LOG, 0.8, 2.0, -4 * math.pi, 4 * math.pi)
        sc = lift_curve(Curve.circle(0, 1), LOG)
        assert pi_gap(sc, U) == pytest.approx(0.2, rel=1e-6)

    def test_circle_in_annulus_spanning_sheets(self):
        U = lifted_annulus_sector(LOG, 0.5, 1.5, -3 * math.pi, 3 * math.pi)
        assert pi_gap(lift_curve(Curve.circle(0, 1), LOG), U) == pytest.approx(0.5, rel=1e-6)

    def test_touching_boundary(self):
        U = lifted_annulus_sector(LOG, 0.5, 1.5, -3 * math.pi, 3 * math.pi)
        assert pi_gap(lift_curve(Curve.circle(0, 1.5), LOG), U) == pytest.approx(0.0, abs=1e-9)

    def test_angular_end_counts_only_on_its_sheet(self):
        # the angular end lies at 2pi + 1 above the curve's sheet, not beside it
        U = lifted_annulus_sector(LOG, 0.5, 3.0, -1.0, TWO_PI + 1.0)
        sc = lift_curve(Curve.circle(0, 1.5, 0.0, turns=0.5), LOG)
        assert pi_gap(sc, U) == pytest.approx(1.0, rel=1e-6)

    def test_branch_point_cap(self):
        # near the branch point the injectivity radius is |z - a| even far from the boundary
        U = lifted_annulus_sector(LOG, 0.5, 3.0, -TWO_PI, TWO_PI)
        K = SurfaceRegion(LOG, [(0, Disk(-0.0 + 0.75j, 0.1))])
        eps = pi_gap(K, U)
        assert eps <= 0.65 + 1e-6
        assert eps == pytest.approx(0.15, rel=1e-5)

    @given(st.integers(-4, 4), st.floats(0.6, 1.4), st.floats(0.0, TWO_PI))
    def test_deck_invariance(self, s, r, start):
        U = lifted_annulus_sector(LOG, 0.5, 2.0, -3 * math.pi, 3 * math.pi)
        sc = lift_curve(Curve.circle(0, r, start - math.pi, turns=0.75), LOG, start_sheet=0)
        assert pi_gap(sc.shift_sheets(s), U.shift_sheets(s)) == pytest.approx(pi_gap(sc, U), abs=1e-12)


class TestSurfaceDiameter:
    def test_trivial_cover(self):
        reg = Rectangle(0, 2 + 1j)
        got = surface_intrinsic_diameter(SurfaceRegion(CoverSpec(), [(0, reg)]))
        assert got.value == intrinsic_diameter(reg).value

    def test_glued_squares(self):
        up = Rectangle(-1.5, -0.5 + 1j)
        down = Rectangle(-1.5 - 1j, -0.5)
        est = surface_intrinsic_diameter(SurfaceRegion(LOG, [(0, up), (1, down)]))
        assert abs(est.value - math.sqrt(5)) <= 2 * est.h
        assert est.value <= 2 * math.sqrt(2)

    def test_unglued_squares(self):
        # same base sets on one sheet meet the cut from opposite sides and stay apart
        with pytest.raises(DisconnectedError):
            surface_intrinsic_diameter(SurfaceRegion(LOG, [(0, Rectangle(-1.5, -0.5 + 1j)),
                                                            (0, Rectangle(-1.5 - 1j, -0.5))]),
                                       GridParams(levels=1))

    def test_multi_sheet_annulus(self):
        r, R, span = 0.9, 1.1, 3 * math.pi
        K = lifted_annulus_sector(LOG, r, R, -span / 2, span / 2)
        est = surface_intrinsic_diameter(K)
        assert est.value >= r * span - 2 * est.h
        assert est.value == pytest.approx(sector_path(r, R, span), rel=0.01)

    def test_deck_invariance(self):
        K = lifted_annulus_sector(LOG, 1.0, 1.3, 0.0, 2.5 * math.pi)
        a = surface_intrinsic_diameter(K).value
        b = surface_intrinsic_diameter(K.shift_sheets(3)).value
        assert a == pytest.approx(b, abs=1e-12)
