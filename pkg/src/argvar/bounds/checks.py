"""Verified inequalities: each check measures its own geometry and returns a BoundCheck.

The gap ``eps`` and diameter ``D`` entering a bound are always measured
from the given sets (never supplied by the caller), after which the
hypotheses of the inequality are tested.  A check holds when

    lhs <= rhs * (1 + 1e-6) + (sum of the error estimates of the sub-results).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..cover import (SurfaceCurve, SurfaceRegion, lift_curve, pi_gap,
                     surface_intrinsic_diameter)
from ..errors import HypothesisError
from ..geom.conformal import ConformalMapEntry
from ..geom.curves import Curve, curve_extremum, curve_length, total_curvature
from ..geom.metric import Estimate, GridParams, gap, gap_curve, intrinsic_diameter
from ..holo import HoloExpr, from_roots, quotient
from . import inequalities as ineq
from .modulus import bernstein_index
from .phase import count_zeros, variation_of_argument

REL_TOL = 1e-6


def _clean(x):
    """JSON-friendly copy of nested inputs (complex as [re, im], numpy scalars as floats)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def digest_of(name: str, inputs: dict) -> str:
    payload = json.dumps({"name": name, "inputs": _clean(inputs)}, sort_keys=True,
                         separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class BoundCheck:
    """One verified inequality ``lhs <= rhs``.

    ``rhs`` may be ``inf`` when the bound exceeds the double range; its
    natural logarithm is kept in ``log_rhs``.  ``status`` is ``"ok"`` for a
    completed check, ``"hypothesis_error"`` when a hypothesis failed and
    ``"error"`` / ``"nonconvergence"`` for internal failures.
    """

    name: str
    lhs: float
    rhs: float
    holds: bool
    tolerance: float = 0.0
    log_rhs: float = math.nan
    inputs: dict = field(default_factory=dict)
    status: str = "ok"
    error: str | None = None
    rel_tol: float = REL_TOL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def digest(self) -> str:
        return digest_of(self.name, self.inputs)

    @staticmethod
    def judge(lhs, rhs, tolerance, rel_tol=REL_TOL) -> bool:
        if not math.isfinite(lhs):
            return False
        if math.isinf(rhs):
            return rhs > 0
        return bool(lhs <= rhs * (1.0 + rel_tol) + tolerance)

    @classmethod
    def evaluate(cls, name, lhs, log_rhs, errors=(), inputs=None):
        rhs = math.exp(log_rhs) if log_rhs < 709.0 else math.inf
        tol = float(sum(abs(e) for e in errors))
        holds = cls.judge(lhs, rhs, tol)
        return cls(name, float(lhs), rhs, holds, tol, float(log_rhs), dict(inputs or {}))

    def with_rel_tol(self, rel_tol: float) -> "BoundCheck":
        """Copy judged with a different relative tolerance."""
        if self.status != "ok":
            return replace(self, rel_tol=rel_tol)
        return replace(self, rel_tol=rel_tol,
                       holds=self.judge(self.lhs, self.rhs, self.tolerance, rel_tol))

    @classmethod
    def failure(cls, name, exc, status="hypothesis_error", inputs=None):
        inputs = dict(inputs or {})
        if getattr(exc, "hypothesis", None):
            inputs["failed_hypothesis"] = exc.hypothesis
        return cls(name, math.nan, math.nan, False, inputs=inputs, status=status,
                   error=f"{type(exc).__name__}: {exc}")

    def to_record(self) -> dict:
        """Flat, JSON-ready record."""
        fin = math.isfinite
        rec = {
            "name": self.name,
            "lhs": self.lhs if fin(self.lhs) else None,
            "rhs": self.rhs if fin(self.rhs) else None,
            "log10_rhs": self.log_rhs / math.log(10) if fin(self.log_rhs) else None,
            "slack": self.slack if fin(self.slack) else None,
            "holds": self.holds,
            "tolerance": self.tolerance,
            "rel_tol": self.rel_tol,
            "status": self.status,
            "error": self.error,
            "digest": self.digest,
        }
        for key in ("epsilon", "D", "gamma_length", "kappa"):
            v = self.inputs.get(key)
            rec[key] = float(v) if v is not None and fin(float(v)) else None
        rec["inputs"] = _clean(self.inputs)
        return rec


def _log(x):
    return math.log(x) if x > 0 else -math.inf


# -------------------------------------------------------------------------
# measurement helpers


def _is_surface(*objs):
    return any(isinstance(o, (SurfaceRegion, SurfaceCurve)) for o in objs)


def _gap(K, U):
    return pi_gap(K, U) if isinstance(U, SurfaceRegion) else gap(K, U)


def _diameter(K, grid) -> Estimate:
    if isinstance(K, SurfaceRegion):
        return surface_intrinsic_diameter(K, grid)
    return intrinsic_diameter(K, grid)


def _planar(gamma):
    return gamma.curve if isinstance(gamma, SurfaceCurve) else gamma


def _nested_geometry(gamma, U2, U1, U, grid, deck_shift=0):
    """Gaps and diameters for a nested triple, with ``eps`` the smallest gap."""
    gaps = {
        "gap_gamma_U2": _gap(gamma, U2),
        "gap_U2_U1": _gap(U2, U1),
        "gap_U1_U": _gap(U1, U),
    }
    d2, d1 = _diameter(U2, grid), _diameter(U1, grid)
    geo = dict(gaps)
    geo.update(diam_U2=d2.value, diam_U2_error=d2.error, diam_U1=d1.value, diam_U1_error=d1.error)
    geo["epsilon"] = min(gaps.values())
    geo["D"] = max(d2.value, d1.value)
    geo["D_error"] = d2.error if d2.value >= d1.value else d1.error
    c = _planar(gamma)
    geo["gamma_length"] = curve_length(c)
    geo["kappa"] = total_curvature(c)
    if deck_shift:
        shifted = [_gap(gamma.shift_sheets(deck_shift), U2.shift_sheets(deck_shift)),
                   _gap(U2.shift_sheets(deck_shift), U1.shift_sheets(deck_shift)),
                   _gap(U1.shift_sheets(deck_shift), U.shift_sheets(deck_shift))]
        diff = max(abs(a - b) for a, b in zip(shifted, gaps.values()))
        geo["deck_shift"] = deck_shift
        geo["deck_gap_max_diff"] = diff
        geo["deck_invariant"] = bool(diff <= 1e-9)
    return geo


def _require_positive_eps(geo):
    if not geo["epsilon"] > 0:
        raise HypothesisError(f"measured gap is {geo['epsilon']:.3g}; sets touch", "gap>0")


# -------------------------------------------------------------------------
# checks


def check_growth_and_zeros(f: HoloExpr, K, U, grid: GridParams | None = None) -> BoundCheck:
    """Zero count of ``f`` in ``K`` against ``B_{K,U}(f) * exp(2 D / eps)``.

    ``D`` is the intrinsic diameter of ``K`` and ``eps`` the (pi-)gap
    between ``K`` and the boundary of ``U``.
    """
    eps = _gap(K, U)
    if not eps > 0:
        raise HypothesisError(f"K touches the boundary of U (gap {eps:.3g})", "gap>0")
    dK = _diameter(K, grid)
    bern = bernstein_index(f, K, U)
    zeros = count_zeros(f, K)
    inputs = {"epsilon": eps, "D": dK.value, "D_error": dK.error, "B": bern.B, "M": bern.M,
              "m": bern.m, "surface": _is_surface(K, U)}
    log_rhs = ineq.log_growth_zeros_bound(bern.B, dK.value, eps)
    return BoundCheck.evaluate("GrowthAndZeros", zeros, log_rhs, inputs=inputs)


def check_theorem1(f: HoloExpr, gamma: Curve, U2, U1, U, grid: GridParams | None = None,
                   name="Theorem1", deck_shift=0) -> BoundCheck:
    """Variation of ``arg f`` along ``gamma`` against ``B (L/eps + kappa + 1) exp(5 D / eps)``.

    ``U2``, ``U1``, ``U`` are the inner, middle and outer sets.  The check
    also records the same estimate with ``2*pi`` in place of the constant 1
    (the form obtained before absorbing constants) under
    ``inputs["intermediate"]``.

    Raises
    ------
    HypothesisError
        If a gap vanishes or ``D / eps <= 3``.
    """
    geo = _nested_geometry(gamma, U2, U1, U, grid, deck_shift)
    _require_positive_eps(geo)
    eps, D = geo["epsilon"], geo["D"]
    geo["D_over_epsilon"] = D / eps
    if not D / eps > 3.0:
        raise HypothesisError(f"need D/eps > 3, measured {D / eps:.6g}", "D/eps>3")
    bern = bernstein_index(f, U2, U)
    var = variation_of_argument(f, gamma)
    L, kappa = geo["gamma_length"], geo["kappa"]
    geo.update(B=bern.B, M=bern.M, m=bern.m, variation_error=var.error)
    log_rhs = ineq.log_theorem_bound(bern.B, L, kappa, D, eps)
    log_rhs_2pi = ineq.log_theorem_bound(bern.B, L, kappa, D, eps, extra=2.0 * math.pi)
    inter = BoundCheck.evaluate(name + "Intermediate", var.value, log_rhs_2pi, [var.error])
    geo["intermediate"] = {"log10_rhs": log_rhs_2pi / math.log(10), "holds": inter.holds,
                           "constant": 2.0 * math.pi}
    return BoundCheck.evaluate(name, var.value, log_rhs, [var.error], geo)


def check_theorem2(f: HoloExpr, gamma: SurfaceCurve, U2: SurfaceRegion, U1: SurfaceRegion,
                   U: SurfaceRegion, cover=None, grid: GridParams | None = None,
                   deck_shift: int = 1) -> BoundCheck:
    """Surface version of :func:`check_theorem1`; ``f`` is a function of the covering coordinate.

    Gaps are pi-gaps and diameters use the metric lifted from the plane.
    With ``deck_shift`` nonzero the three pi-gaps are recomputed after
    shifting every sheet and their agreement is recorded.
    """
    if cover is not None:
        for obj in (gamma, U2, U1, U):
            if obj.cover != cover:
                raise HypothesisError("all surface data must live on the same cover", "same cover")
    if isinstance(gamma, Curve):
        gamma = lift_curve(gamma, U.cover, 0)
    return check_theorem1(f, gamma, U2, U1, U, grid, name="Theorem2", deck_shift=deck_shift)


def check_lemma1(F: HoloExpr, gamma, U2, U1, grid: GridParams | None = None) -> BoundCheck:
    """Variation of a nowhere-zero ``F`` against ``B_{U2,U1}(F) (L/eps) exp(2 D / eps)``.

    ``eps`` is the smaller of the gaps (gamma, U2) and (U2, U1); ``D`` the
    larger intrinsic diameter of ``U2`` and ``U1``.

    Raises
    ------
    HypothesisError
        If ``F`` has zeros in ``U1`` or a gap vanishes.
    """
    gaps = {"gap_gamma_U2": _gap(gamma, U2), "gap_U2_U1": _gap(U2, U1)}
    d2, d1 = _diameter(U2, grid), _diameter(U1, grid)
    geo = dict(gaps, diam_U2=d2.value, diam_U1=d1.value, epsilon=min(gaps.values()),
               D=max(d2.value, d1.value))
    _require_positive_eps(geo)
    nz = count_zeros(F, U1)
    if nz != 0:
        raise HypothesisError(f"F has {nz} zeros in U'", "F nowhere zero")
    c = _planar(gamma)
    geo.update(gamma_length=curve_length(c), kappa=total_curvature(c))
    bern = bernstein_index(F, U2, U1)
    var = variation_of_argument(F, gamma)
    geo.update(B=bern.B, M=bern.M, m=bern.m, variation_error=var.error)
    log_rhs = ineq.log_lemma1_bound(bern.B, geo["gamma_length"], geo["D"], geo["epsilon"])
    return BoundCheck.evaluate("Lemma1", var.value, log_rhs, [var.error], geo)


def check_lemma2(f: HoloExpr, p_roots, U2, U1, U, grid: GridParams | None = None) -> BoundCheck:
    """Bernstein index of ``F = f / p`` against ``B_{U2,U}(f) + d log(D / eps)``.

    ``p`` is the monic polynomial with roots ``p_roots`` (all inside ``U1``);
    ``eps`` is the smaller of the gaps (U2, U1) and (U1, U) and ``D`` the
    larger intrinsic diameter of ``U2`` and ``U1``.
    """
    roots = [complex(r) for r in p_roots]
    if roots and not np.all(U1.contains(np.array(roots))):
        raise HypothesisError("roots of p must lie in U'", "roots in U'")
    gaps = {"gap_U2_U1": _gap(U2, U1), "gap_U1_U": _gap(U1, U)}
    d2, d1 = _diameter(U2, grid), _diameter(U1, grid)
    geo = dict(gaps, diam_U2=d2.value, diam_U1=d1.value, epsilon=min(gaps.values()),
               D=max(d2.value, d1.value), degree=len(roots))
    _require_positive_eps(geo)
    if not geo["D"] / geo["epsilon"] > 1.0:
        raise HypothesisError(f"need D/eps > 1, measured {geo['D'] / geo['epsilon']:.6g}", "D/eps>1")
    F = quotient(f, from_roots(roots))
    bern_f = bernstein_index(f, U2, U)
    bern_F = bernstein_index(F, U2, U)
    geo.update(B=bern_f.B, B_F=bern_F.B)
    rhs = ineq.lemma2_bound(bern_f.B, len(roots), geo["D"], geo["epsilon"])
    # each Bernstein index carries the relative search tolerance of its two maxima
    err = 4e-6 * (1.0 + abs(bern_f.B) + abs(bern_F.B))
    holds = BoundCheck.judge(bern_F.B, rhs, err)
    return BoundCheck("Lemma2", bern_F.B, rhs, holds, err, _log(rhs), geo)


def koebe_ratio_check(phi: ConformalMapEntry, gamma: Curve, eps: float | None = None) -> BoundCheck:
    """Distortion ``max_gamma |phi''/phi'|`` against ``2 / eps``."""
    eps_measured = gap_curve(gamma, phi.source)
    eps = eps_measured if eps is None else float(eps)
    if not 0 < eps <= eps_measured * (1 + 1e-12):
        raise HypothesisError(f"gap of gamma in the source is {eps_measured:.6g} < eps={eps:.6g}",
                              "gap>=eps")
    segs = gamma.segments

    def ratio(i, t):
        _, d1, d2 = phi.forward.jets(segs[i].point(t))
        return np.abs(d2 / d1)

    lhs, _, _ = curve_extremum(gamma, ratio, mode="max", rtol=1e-9, atol=1e-14)
    inputs = {"epsilon": eps, "gamma_length": curve_length(gamma), "basepoint": phi.basepoint}
    return BoundCheck.evaluate("Koebe", lhs, math.log(2.0 / eps), inputs=inputs)


def check_lemma3(phi: ConformalMapEntry, gamma: Curve, eps: float | None = None) -> BoundCheck:
    """Total curvature of ``phi(gamma)`` against ``kappa(gamma) + 2 |gamma| / eps``."""
    eps_measured = gap_curve(gamma, phi.source)
    eps = eps_measured if eps is None else float(eps)
    if not 0 < eps <= eps_measured * (1 + 1e-12):
        raise HypothesisError(f"gap of gamma in the source is {eps_measured:.6g} < eps={eps:.6g}",
                              "gap>=eps")
    L, kappa = curve_length(gamma), total_curvature(gamma)
    lhs = total_curvature(gamma.image(phi.forward))
    rhs = ineq.lemma3_bound(kappa, L, eps)
    inputs = {"epsilon": eps, "gamma_length": L, "kappa": kappa, "basepoint": phi.basepoint}
    # quadrature of the image curvature is converged to ~1e-13 relative
    return BoundCheck.evaluate("Lemma3", lhs, math.log(rhs), [1e-9 * max(1.0, lhs)], inputs)


def check_submultiplicativity(f: HoloExpr, p: HoloExpr, gamma) -> BoundCheck:
    """``V(f) <= V(f/p) + V(p)`` with the three variations computed independently."""
    F = quotient(f, p)
    vf = variation_of_argument(f, gamma)
    vF = variation_of_argument(F, gamma)
    vp = variation_of_argument(p, gamma)
    rhs = vF.value + vp.value
    c = _planar(gamma)
    inputs = {"V_f": vf.value, "V_F": vF.value, "V_p": vp.value,
              "gamma_length": curve_length(c), "kappa": total_curvature(c)}
    errs = [vf.error, vF.error, vp.error]
    tol = float(sum(errs))
    return BoundCheck("Eq14", vf.value, rhs, BoundCheck.judge(vf.value, rhs, tol), tol, _log(rhs), inputs)
