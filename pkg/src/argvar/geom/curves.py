"""Piecewise-smooth oriented curves in the complex plane.

A :class:`Curve` is a chain of segments, each parameterized over ``t in
[0, 1]`` and able to report exact position, velocity and acceleration.
Analytic segments carry a holomorphic expression in ``t``, which makes the
image of any curve under a holomorphic map another exact curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .._config import max_refine
from .._quad import abs_integral, gauss_legendre, polish_max
from ..errors import CurveError, CuspError, NonconvergenceError, ParseError
from ..holo import Affine, Compose, Coord, Exp, HoloExpr, _cx_out, expr_from_dict, parse_complex

JOIN_TOL = 1e-9
MIN_SPEED = 1e-9
CUSP_TOL = 1e-9


class Segment:
    """Smooth piece of a curve, parameterized over [0, 1]."""

    def jets(self, t):
        """Position, velocity and acceleration at parameters ``t``."""
        raise NotImplementedError

    def point(self, t):
        return self.jets(np.atleast_1d(np.asarray(t, dtype=float)))[0]

    @property
    def start(self) -> complex:
        return complex(self.point(0.0)[0])

    @property
    def end(self) -> complex:
        return complex(self.point(1.0)[0])

    def tangent(self, t) -> complex:
        return complex(self.jets(np.array([float(t)]))[1][0])

    def to_expr(self) -> HoloExpr:
        raise NotImplementedError

    def reversed(self) -> "Segment":
        raise NotImplementedError

    def speed_ok(self) -> bool:
        t = (np.arange(64) + 0.5) / 64
        return bool(np.min(np.abs(self.jets(t)[1])) > MIN_SPEED)

    @cached_property
    def length(self) -> float:
        return gauss_legendre(lambda t: np.abs(self.jets(t)[1]), 0.0, 1.0)

    @cached_property
    def curvature(self) -> float:
        """Integral of the absolute curvature over the arclength."""
        return abs_integral(self._signed_curvature_density)

    def _signed_curvature_density(self, t):
        _, g1, g2 = self.jets(t)
        sp2 = np.abs(g1) ** 2
        return np.where(sp2 > 0, np.imag(g2 * np.conj(g1)) / np.where(sp2 > 0, sp2, 1.0), 0.0)


@dataclass(frozen=True, eq=True)
class Line(Segment):
    p: complex
    q: complex

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "q", complex(self.q))

    def jets(self, t):
        t = np.asarray(t, dtype=float)
        d = self.q - self.p
        return self.p + d * t, np.full(t.shape, d, dtype=complex), np.zeros(t.shape, dtype=complex)

    @cached_property
    def length(self) -> float:
        return abs(self.q - self.p)

    @cached_property
    def curvature(self) -> float:
        return 0.0

    def to_expr(self):
        return Affine(Coord(), self.q - self.p, self.p)

    def reversed(self):
        return Line(self.q, self.p)

    def closest(self, z):
        d = self.q - self.p
        s = np.clip(np.real((z - self.p) * np.conj(d)) / (abs(d) ** 2), 0.0, 1.0)
        return self.p + s * d

    def to_dict(self):
        return {"type": "line", "p": _cx_out(self.p), "q": _cx_out(self.q)}


@dataclass(frozen=True, eq=True)
class Arc(Segment):
    """Circular arc ``center + radius*exp(i*theta)``, theta from ``theta0`` to ``theta1``.

    The arc runs counterclockwise when ``theta1 > theta0``.
    """

    center: complex
    radius: float
    theta0: float
    theta1: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise CurveError(f"arc radius must be positive, got {self.radius}")
        if self.theta1 == self.theta0:
            raise CurveError("arc has zero angular extent")

    @property
    def sweep(self) -> float:
        return self.theta1 - self.theta0

    def jets(self, t):
        t = np.asarray(t, dtype=float)
        e = self.radius * np.exp(1j * (self.theta0 + self.sweep * t))
        w = 1j * self.sweep
        return self.center + e, w * e, w * w * e

    @cached_property
    def length(self) -> float:
        return self.radius * abs(self.sweep)

    @cached_property
    def curvature(self) -> float:
        return abs(self.sweep)

    def to_expr(self):
        return self.center + self.radius * Affine(Exp(Coord()), 1j * self.sweep, 1j * self.theta0)

    def reversed(self):
        return Arc(self.center, self.radius, self.theta1, self.theta0)

    def closest(self, z):
        """Closest arc point to each of ``z`` (exact)."""
        lo, hi = sorted((self.theta0, self.theta1))
        rel = z - self.center
        ang = np.angle(rel)
        # representative of ang in [lo, lo + 2pi)
        ang = lo + np.mod(ang - lo, 2 * np.pi)
        inside = ang <= hi
        on = self.center + self.radius * np.exp(1j * ang)
        a = self.center + self.radius * np.exp(1j * lo)
        b = self.center + self.radius * np.exp(1j * hi)
        end = np.where(np.abs(z - a) <= np.abs(z - b), a, b)
        return np.where(inside, on, end)

    def to_dict(self):
        return {"type": "arc", "center": _cx_out(self.center), "radius": self.radius,
                "theta0": self.theta0, "theta1": self.theta1}


@dataclass(frozen=True, eq=True)
class Analytic(Segment):
    """Segment ``t -> path(t)`` given by a holomorphic expression in ``t``."""

    path: HoloExpr

    def jets(self, t):
        t = np.asarray(t, dtype=float)
        return self.path.jets(t.astype(complex))

    def to_expr(self):
        return self.path

    def reversed(self):
        return Analytic(Affine(self.path, -1.0, 1.0))

    def to_dict(self):
        return {"type": "analytic", "path": self.path.to_dict()}


def segment_from_dict(d: dict) -> Segment:
    kind = d.get("type") if isinstance(d, dict) else None
    try:
        if kind == "line":
            return Line(parse_complex(d["p"]), parse_complex(d["q"]))
        if kind == "arc":
            return Arc(parse_complex(d["center"]), float(d["radius"]),
                       float(d["theta0"]), float(d["theta1"]))
        if kind == "analytic":
            return Analytic(expr_from_dict(d["path"]))
    except KeyError as exc:
        raise ParseError(f"segment {d!r} is missing field {exc.args[0]!r}") from None
    raise ParseError(f"unknown segment type {kind!r}")


class Curve:
    """Oriented chain of smooth segments sharing endpoints."""

    def __init__(self, segments):
        segments = tuple(segments)
        if not segments:
            raise CurveError("a curve needs at least one segment")
        for i, seg in enumerate(segments):
            if not seg.speed_ok():
                raise CurveError(f"segment {i} has (nearly) vanishing velocity")
        for i in range(len(segments) - 1):
            a, b = segments[i].end, segments[i + 1].start
            if abs(a - b) > JOIN_TOL * max(1.0, abs(a)):
                raise CurveError(f"segments {i} and {i + 1} do not share an endpoint ({a} vs {b})")
        self.segments = segments

    # constructors -----------------------------------------------------
    @classmethod
    def circle(cls, center=0.0, radius=1.0, start_angle=0.0, turns=1.0, clockwise=False):
        sweep = 2 * np.pi * turns * (-1.0 if clockwise else 1.0)
        return cls([Arc(center, radius, start_angle, start_angle + sweep)])

    @classmethod
    def polygon(cls, vertices, closed=True):
        v = [complex(x) for x in vertices]
        if closed:
            v = v + [v[0]]
        return cls([Line(a, b) for a, b in zip(v[:-1], v[1:])])

    @classmethod
    def segment(cls, p, q):
        return cls([Line(p, q)])

    @classmethod
    def analytic(cls, path: HoloExpr):
        return cls([Analytic(path)])

    # basic geometry ---------------------------------------------------
    @property
    def start(self) -> complex:
        return self.segments[0].start

    @property
    def end(self) -> complex:
        return self.segments[-1].end

    @property
    def closed(self) -> bool:
        return abs(self.end - self.start) <= JOIN_TOL * max(1.0, abs(self.start))

    def reversed(self) -> "Curve":
        return Curve([s.reversed() for s in reversed(self.segments)])

    def image(self, phi: HoloExpr) -> "Curve":
        """The curve ``phi(gamma)``, with analytic segments composed through jets."""
        return Curve([Analytic(Compose(phi, s.to_expr())) for s in self.segments])

    def vertex_angles(self):
        """Signed exterior turning angles at the vertices (including the closing one)."""
        pairs = list(zip(self.segments[:-1], self.segments[1:]))
        if self.closed:
            pairs.append((self.segments[-1], self.segments[0]))
        angles = []
        for a, b in pairs:
            ta, tb = a.tangent(1.0), b.tangent(0.0)
            angles.append(float(np.angle(tb / ta)))
        return angles

    def param_grid(self, n):
        """About ``n`` parameters spread over the segments proportionally to length."""
        lengths = np.array([s.length for s in self.segments])
        total = float(lengths.sum())
        out = []
        for L in lengths:
            k = max(8, int(np.ceil(n * L / total))) if total > 0 else 8
            out.append(np.linspace(0.0, 1.0, k + 1))
        return out

    def sample(self, n=256):
        """Points along the curve (about ``n``, endpoints included)."""
        return np.concatenate([s.point(t) for s, t in zip(self.segments, self.param_grid(n))])

    def to_dict(self):
        return {"segments": [s.to_dict() for s in self.segments]}

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, dict) and "circle" in d:
            c = d["circle"]
            return cls.circle(parse_complex(c.get("center", 0.0)), float(c["radius"]),
                              float(c.get("start_angle", 0.0)), float(c.get("turns", 1.0)),
                              bool(c.get("clockwise", False)))
        if isinstance(d, dict) and "polygon" in d:
            return cls.polygon([parse_complex(v) for v in d["polygon"]], bool(d.get("closed", True)))
        if not isinstance(d, dict) or "segments" not in d:
            raise ParseError(f"curve must have 'segments', 'circle' or 'polygon', got {d!r}")
        return cls([segment_from_dict(s) for s in d["segments"]])

    def __repr__(self):
        return f"Curve({len(self.segments)} segments, start={self.start:.6g})"


def curve_length(curve: Curve) -> float:
    """Euclidean length (exact for lines and arcs, quadrature for analytic pieces)."""
    return float(sum(s.length for s in curve.segments))


def total_curvature(curve: Curve) -> float:
    """Integral of |curvature| over smooth parts plus exterior angles at vertices."""
    total = float(sum(s.curvature for s in curve.segments))
    for k, ang in enumerate(curve.vertex_angles()):
        if abs(ang) >= np.pi - CUSP_TOL:
            raise CuspError(f"tangent reversal at vertex {k}")
        total += abs(ang)
    return total


def curve_extremum(curve: Curve, fun, mode="max", rtol=1e-6, atol=0.0, n0=128):
    """Extremum over the curve of ``fun(segment_index, t)``.

    Samples are doubled until two successive (locally polished) answers
    agree to ``rtol``.  Returns ``(value, segment_index, t)``.
    """
    sign = 1.0 if mode == "max" else -1.0
    prev = None
    n = n0
    for _ in range(max_refine() + 1):
        best = (-np.inf, 0, 0.0, None)
        for i, t in enumerate(curve.param_grid(n)):
            vals = sign * np.asarray(fun(i, t), dtype=float)
            j = int(np.argmax(vals))
            if vals[j] > best[0]:
                best = (float(vals[j]), i, float(t[j]), t)
        value, i, tb, t = best
        j = int(np.searchsorted(t, tb))
        lo, hi = t[max(j - 1, 0)], t[min(j + 1, len(t) - 1)]
        value, tp = polish_max(lambda x, i=i: sign * np.asarray(fun(i, x), dtype=float), lo, hi, value)
        if tp is not None:
            tb = tp
        value *= sign
        if prev is not None and abs(value - prev) <= max(rtol * abs(value), atol):
            return value, i, tb
        prev = value
        n *= 2
    raise NonconvergenceError(f"curve {mode} did not converge after {max_refine()} doublings")
