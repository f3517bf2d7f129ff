"""Maximum modulus searches and the Bernstein index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..cover import SurfaceCurve, SurfaceRegion
from ..errors import ContainmentError, UnsupportedShapeError, ZeroFunctionError
from ..geom.curves import Curve, curve_extremum
from ..geom.regions import Region
from ..holo import HoloExpr

MOD_RTOL = 1e-6
M_FLOOR = 1e-300


@dataclass(frozen=True)
class BernsteinData:
    """``M = sup_U |f|``, ``m = max_K |f|`` and ``B = log(M / m)``."""

    M: float
    m: float
    B: float

    def to_dict(self):
        return {"M": self.M, "m": self.m, "B": self.B}


def _curve_max(f: HoloExpr, curve: Curve) -> float:
    segs = curve.segments
    value, _, _ = curve_extremum(curve, lambda i, t: np.abs(f(segs[i].point(t))),
                                 mode="max", rtol=MOD_RTOL, atol=1e-300)
    return float(value)


def _surface_curve_max(f: HoloExpr, sc: SurfaceCurve) -> float:
    if sc.cover.trivial:
        return _curve_max(f, sc.curve)

    def fun(i, t):
        w, _, _ = sc.coordinate_jets(i, t)
        return np.abs(f(w))

    value, _, _ = curve_extremum(sc.curve, fun, mode="max", rtol=MOD_RTOL, atol=1e-300)
    return float(value)


def _pieces(f, R):
    if isinstance(R, SurfaceRegion):
        return [(R.cover.on_sheet(f, k), reg) for k, reg in R.shrunk_pieces()]
    return [(f, R)]


def sup_modulus(f: HoloExpr, U) -> float:
    """Supremum of ``|f|`` over ``U``, searched on the boundary (maximum principle).

    Boundary samples are doubled until two polished maxima agree to a
    relative 1e-6.  Surface regions are handled piece by piece.
    """
    if isinstance(U, Region) and not U.bounded:
        raise UnsupportedShapeError("sup over an unbounded region is not computed")
    return max(_curve_max(g, reg.boundary()) for g, reg in _pieces(f, U))


def max_modulus_on_compact(f: HoloExpr, K) -> float:
    """Maximum of ``|f|`` over a compact set: region, curve or their surface versions.

    Regions are searched on their boundary (maximum principle), which also
    keeps evaluations away from removable singularities of quotients inside.
    Curves are searched along themselves.
    """
    if isinstance(K, SurfaceCurve):
        return _surface_curve_max(f, K)
    if isinstance(K, Curve):
        return _curve_max(f, K)
    return max(_curve_max(g, reg.boundary()) for g, reg in _pieces(f, K))


def bernstein_index(f: HoloExpr, K, U) -> BernsteinData:
    """Bernstein index ``B = log(sup_U |f| / max_K |f|)``.

    Raises
    ------
    ZeroFunctionError
        If ``max_K |f|`` is below 1e-300.
    ContainmentError
        If ``max_K |f|`` exceeds ``sup_U |f|`` beyond the search tolerance.
    """
    m = max_modulus_on_compact(f, K)
    if not m >= M_FLOOR:
        raise ZeroFunctionError(f"max |f| on K is {m:.3g}; f vanishes numerically on K")
    M = sup_modulus(f, U)
    B = float(np.log(M / m))
    if B < 0.0:
        if B < -10 * MOD_RTOL:
            raise ContainmentError(f"max over K exceeds sup over U (log ratio {B:.3g}); is K inside U?")
        B = 0.0
    return BernsteinData(float(M), float(m), B)
