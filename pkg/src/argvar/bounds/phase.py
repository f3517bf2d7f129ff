"""Continuous argument tracking: variation of argument and zero counting.

Along each smooth segment the parameter grid is refined until every step
changes ``log f`` by less than pi/4 in the worst sampled direction, so the
principal argument of the ratio ``f(t_{k+1}) / f(t_k)`` is the true phase
increment.  Local extrema of the phase (zeros of ``Im (log f)'``) are
inserted into the grid, after which the sum of absolute increments is the
exact total variation of the sampled branch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .._config import max_refine
from ..cover import SurfaceCurve, SurfaceRegion
from ..errors import (BoundaryZeroError, NonconvergenceError, NonIntegerWindingError,
                      ZeroOnCurveError)
from ..geom.curves import Curve
from ..geom.regions import Region
from ..holo import HoloExpr

STEP_GUARD = np.pi / 4
ZERO_FLOOR = 1e-9
N0 = 32
MAX_BISECT = 80


@dataclass(frozen=True)
class VarArgResult:
    """Total variation of a continuous branch of ``arg f`` along a curve.

    Attributes
    ----------
    value : float
        Variation in radians.
    depth : int
        Number of grid halvings performed after the adaptive grid settled.
    error : float
        Change of the value under the last halving.
    """

    value: float
    depth: int
    error: float


def _evaluators(f: HoloExpr, gamma):
    """Per-segment callables ``t -> (f(gamma(t)), d/dt log f(gamma(t)))``."""
    if isinstance(gamma, SurfaceCurve):
        segs = gamma.curve.segments
        if gamma.cover.trivial:
            gamma = gamma.curve
        else:
            def make(i):
                def ev(t):
                    _, g1, _ = segs[i].jets(t)
                    w, w1, _ = gamma.coordinate_jets(i, t)
                    v, d1, _ = f.jets(w)
                    return v, d1 * w1 * g1 / np.where(v == 0, 1.0, v)
                return ev
            return [make(i) for i in range(len(segs))]
    segs = gamma.segments

    def make_planar(i):
        def ev(t):
            z, g1, _ = segs[i].jets(t)
            v, d1, _ = f.jets(z)
            return v, d1 * g1 / np.where(v == 0, 1.0, v)
        return ev

    return [make_planar(i) for i in range(len(segs))]


class _Tracker:
    def __init__(self, evs, zero_error):
        self.evs = evs
        self.zero_error = zero_error
        self.scale = None

    def _eval(self, i, t):
        v, dl = self.evs[i](t)
        if self.scale is None:
            self.scale = float(np.max(np.abs(v)))
            if not self.scale > 0:
                raise self.zero_error("function vanishes identically on the curve")
        small = np.abs(v) < ZERO_FLOOR * self.scale
        if np.any(small):
            k = int(np.argmax(small))
            raise self.zero_error(f"|f| = {abs(v[k]):.3g} on the curve at segment {i}, t={t[k]:.12g}")
        return v, dl

    def adaptive(self, i, t):
        """Refine ``t`` until the step guard holds on every interval."""
        v, dl = self._eval(i, t)
        for _ in range(MAX_BISECT):
            dt = np.diff(t)
            rate = np.maximum(np.abs(dl[:-1]), np.abs(dl[1:]))
            jump = np.abs(np.angle(v[1:] / v[:-1]))
            bad = (dt * rate > STEP_GUARD) | (jump > STEP_GUARD)
            if not np.any(bad):
                return t, v, dl
            mid = 0.5 * (t[:-1][bad] + t[1:][bad])
            vm, dm = self._eval(i, mid)
            t, v, dl = _merge(t, v, dl, mid, vm, dm)
        raise NonconvergenceError(f"phase step guard not met on segment {i} after {MAX_BISECT} bisections")

    def turning_points(self, i, t, dl):
        """Insert the zeros of ``Im (log f)'`` into the grid."""
        s = dl.imag
        idx = np.nonzero(s[:-1] * s[1:] < 0.0)[0]
        if idx.size == 0:
            return t

        def g(x):
            return float(self.evs[i](np.array([x]))[1][0].imag)

        roots = [brentq(g, t[k], t[k + 1], xtol=1e-15, rtol=1e-15) for k in idx]
        return np.union1d(t, roots)


def _merge(t, v, dl, tm, vm, dm):
    tt = np.concatenate([t, tm])
    order = np.argsort(tt, kind="stable")
    return tt[order], np.concatenate([v, vm])[order], np.concatenate([dl, dm])[order]


def variation_of_argument(f: HoloExpr, gamma, rtol: float = 1e-10) -> VarArgResult:
    """Total variation of a continuous branch of ``arg f`` along ``gamma``.

    Parameters
    ----------
    f : HoloExpr
        Function in the plane, or in the covering coordinate when ``gamma``
        is a :class:`~argvar.cover.SurfaceCurve`.
    gamma : Curve or SurfaceCurve
    rtol : float
        Halving stops once two levels agree to ``rtol * max(1, V)``.

    Raises
    ------
    ZeroOnCurveError
        If ``|f|`` drops below 1e-9 times its sampled maximum on the curve.
    NonconvergenceError
        If the halvings do not settle within the refinement budget.
    """
    tr = _Tracker(_evaluators(f, gamma), ZeroOnCurveError)
    curve = gamma.curve if isinstance(gamma, SurfaceCurve) else gamma
    grids = [tr.adaptive(i, np.linspace(0.0, 1.0, N0 + 1))[0] for i in range(len(curve.segments))]

    def level(gs):
        out, total = [], 0.0
        for i, t in enumerate(gs):
            v, dl = tr._eval(i, t)
            t = tr.turning_points(i, t, dl)
            v, _ = tr._eval(i, t)
            out.append(t)
            total += float(np.abs(np.angle(v[1:] / v[:-1])).sum())
        return out, total

    grids, prev = level(grids)
    for depth in range(1, max_refine() + 1):
        grids, value = level([np.union1d(t, 0.5 * (t[:-1] + t[1:])) for t in grids])
        err = abs(value - prev)
        if err <= rtol * max(1.0, value):
            return VarArgResult(value, depth, err)
        prev = value
    raise NonconvergenceError(f"variation of argument did not settle after {max_refine()} halvings")


def winding_number(f: HoloExpr, gamma, zero_error=ZeroOnCurveError) -> float:
    """Net change of ``arg f`` along a closed curve divided by 2*pi (not rounded)."""
    tr = _Tracker(_evaluators(f, gamma), zero_error)
    curve = gamma.curve if isinstance(gamma, SurfaceCurve) else gamma
    total = 0.0
    for i, _ in enumerate(curve.segments):
        t, v, _ = tr.adaptive(i, np.linspace(0.0, 1.0, N0 + 1))
        total += float(np.angle(v[1:] / v[:-1]).sum())
    return total / (2.0 * np.pi)


def _count_planar(f: HoloExpr, R: Region) -> int:
    bd = R.boundary()
    w = winding_number(f, bd, BoundaryZeroError)
    n = round(w)
    if abs(w - n) <= 1e-3:
        return int(n)
    # a coarse grid can miss a fast phase swing; retry on a denser start
    tr = _Tracker(_evaluators(f, bd), BoundaryZeroError)
    for level in range(1, max_refine() + 1):
        total = 0.0
        for i, _ in enumerate(bd.segments):
            t, v, _ = tr.adaptive(i, np.linspace(0.0, 1.0, N0 * 2 ** level + 1))
            total += float(np.angle(v[1:] / v[:-1]).sum())
        w = total / (2.0 * np.pi)
        n = round(w)
        if abs(w - n) <= 1e-3:
            return int(n)
    raise NonIntegerWindingError(f"winding number {w:.6g} is not within 1e-3 of an integer")


def count_zeros(f: HoloExpr, R) -> int:
    """Number of zeros of ``f`` in ``R`` counted with multiplicity (argument principle).

    ``R`` is a planar region or a :class:`~argvar.cover.SurfaceRegion`; in
    the latter case ``f`` is an expression in the covering coordinate and
    the counts of the sheet pieces are added.

    Raises
    ------
    BoundaryZeroError
        If ``|f|`` is numerically zero on the boundary.
    NonIntegerWindingError
        If the winding number does not settle near an integer.
    """
    if isinstance(R, SurfaceRegion):
        return sum(_count_planar(R.cover.on_sheet(f, k), reg) for k, reg in R.shrunk_pieces())
    if isinstance(R, Curve):
        raise TypeError("count_zeros needs a region, not a curve")
    return _count_planar(f, R)
