"""Catalog of planar regions: disks, rectangles, polygons, annulus sectors, half-planes.

All regions are open sets with vectorized membership and exact distance to
the boundary.  Bounded regions expose their boundary as a counterclockwise
:class:`~argvar.geom.curves.Curve`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ParseError, RegionError, UnsupportedShapeError
from ..holo import _cx_out, parse_complex
from .curves import Arc, Curve, Line

TWO_PI = 2.0 * np.pi


def _pts(z):
    return np.asarray(z, dtype=complex)


def _segment_distance(z, p, q):
    d = q - p
    s = np.clip(np.real((z - p) * np.conj(d)) / (abs(d) ** 2), 0.0, 1.0)
    return np.abs(z - (p + s * d))


class Region:
    """Open planar region."""

    convex = False
    bounded = True

    def contains(self, z):
        raise NotImplementedError

    def distance_to_boundary(self, z):
        raise NotImplementedError

    def boundary(self) -> Curve:
        raise NotImplementedError

    def bbox(self):
        """``(xmin, xmax, ymin, ymax)``."""
        raise NotImplementedError

    def interior_point(self) -> complex:
        raise NotImplementedError

    def shrink(self, delta: float) -> "Region":
        """The set of points at distance more than ``delta`` inside (or a subset of it)."""
        raise NotImplementedError

    @property
    def scale(self) -> float:
        x0, x1, y0, y1 = self.bbox()
        return float(np.hypot(x1 - x0, y1 - y0))

    def euclidean_diameter(self) -> float:
        pts = self.boundary().sample(2048)
        d = np.abs(pts[:, None] - pts[None, :])
        return float(d.max())

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Disk(Region):
    center: complex
    radius: float

    convex = True

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise RegionError(f"disk radius must be positive, got {self.radius}")

    def contains(self, z):
        return np.abs(_pts(z) - self.center) < self.radius

    def distance_to_boundary(self, z):
        return np.abs(np.abs(_pts(z) - self.center) - self.radius)

    def boundary(self):
        return Curve.circle(self.center, self.radius)

    def bbox(self):
        c, r = self.center, self.radius
        return c.real - r, c.real + r, c.imag - r, c.imag + r

    def interior_point(self):
        return self.center

    def shrink(self, delta):
        return Disk(self.center, self.radius - delta)

    def euclidean_diameter(self):
        return 2.0 * self.radius

    def to_dict(self):
        return {"shape": "disk", "center": _cx_out(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Rectangle(Region):
    """Axis-parallel rectangle given by two opposite corners."""

    corner1: complex
    corner2: complex

    convex = True

    def __post_init__(self):
        a, b = complex(self.corner1), complex(self.corner2)
        lo = complex(min(a.real, b.real), min(a.imag, b.imag))
        hi = complex(max(a.real, b.real), max(a.imag, b.imag))
        if not (hi.real > lo.real and hi.imag > lo.imag):
            raise RegionError("rectangle has zero area")
        object.__setattr__(self, "corner1", lo)
        object.__setattr__(self, "corner2", hi)

    @property
    def vertices(self):
        lo, hi = self.corner1, self.corner2
        return [lo, complex(hi.real, lo.imag), hi, complex(lo.real, hi.imag)]

    def contains(self, z):
        z = _pts(z)
        lo, hi = self.corner1, self.corner2
        return (z.real > lo.real) & (z.real < hi.real) & (z.imag > lo.imag) & (z.imag < hi.imag)

    def distance_to_boundary(self, z):
        z = _pts(z)
        lo, hi = self.corner1, self.corner2
        inside = self.contains(z)
        d_in = np.minimum.reduce([z.real - lo.real, hi.real - z.real, z.imag - lo.imag, hi.imag - z.imag])
        dx = np.maximum.reduce([lo.real - z.real, np.zeros(z.shape), z.real - hi.real])
        dy = np.maximum.reduce([lo.imag - z.imag, np.zeros(z.shape), z.imag - hi.imag])
        d_out = np.hypot(dx, dy)
        # points outside but level with a side
        return np.where(inside, d_in, np.where(d_out > 0, d_out, np.abs(d_in)))

    def boundary(self):
        return Curve.polygon(self.vertices)

    def bbox(self):
        return self.corner1.real, self.corner2.real, self.corner1.imag, self.corner2.imag

    def interior_point(self):
        return 0.5 * (self.corner1 + self.corner2)

    def shrink(self, delta):
        return Rectangle(self.corner1 + complex(delta, delta), self.corner2 - complex(delta, delta))

    def euclidean_diameter(self):
        return abs(self.corner2 - self.corner1)

    def to_dict(self):
        return {"shape": "rectangle", "corners": [_cx_out(self.corner1), _cx_out(self.corner2)]}


def _segments_cross(p1, p2, q1, q2):
    def orient(a, b, c):
        return np.sign(((b - a).conjugate() * (c - a)).imag)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return o1 * o2 <= 0 and o3 * o4 <= 0


@dataclass(frozen=True)
class Polygon(Region):
    """Simple polygon; vertices are stored counterclockwise."""

    vertices: tuple

    def __post_init__(self):
        v = [complex(x) for x in self.vertices]
        if len(v) < 3:
            raise RegionError("a polygon needs at least three vertices")
        area = 0.5 * sum((a.conjugate() * b).imag for a, b in zip(v, v[1:] + v[:1]))
        if abs(area) <= 1e-14:
            raise RegionError("polygon has zero area")
        if area < 0:
            v = v[::-1]
        n = len(v)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                    raise RegionError("polygon is not simple (edges intersect)")
        object.__setattr__(self, "vertices", tuple(v))

    @cached_property
    def convex(self):
        v = self.vertices
        n = len(v)
        cross = [((v[(i + 1) % n] - v[i]).conjugate() * (v[(i + 2) % n] - v[(i + 1) % n])).imag
                 for i in range(n)]
        return all(c >= 0 for c in cross)

    def _edges(self):
        v = self.vertices
        return list(zip(v, v[1:] + v[:1]))

    def contains(self, z):
        z = _pts(z)
        inside = np.zeros(z.shape, dtype=bool)
        for a, b in self._edges():
            cond = (a.imag > z.imag) != (b.imag > z.imag)
            with np.errstate(divide="ignore", invalid="ignore"):
                xcross = a.real + (z.imag - a.imag) * (b.real - a.real) / (b.imag - a.imag)
            inside ^= cond & (z.real < xcross)
        return inside & (self.distance_to_boundary(z) > 0)

    def distance_to_boundary(self, z):
        z = _pts(z)
        return np.minimum.reduce([_segment_distance(z, a, b) for a, b in self._edges()])

    def boundary(self):
        return Curve.polygon(self.vertices)

    def bbox(self):
        v = np.array(self.vertices)
        return v.real.min(), v.real.max(), v.imag.min(), v.imag.max()

    def interior_point(self):
        # centroid of the first ear that contains it; falls back to a grid search
        c = complex(np.mean(self.vertices))
        if self.contains(c):
            return c
        x0, x1, y0, y1 = self.bbox()
        xs, ys = np.meshgrid(np.linspace(x0, x1, 41)[1:-1], np.linspace(y0, y1, 41)[1:-1])
        pts = (xs + 1j * ys).ravel()
        d = np.where(self.contains(pts), self.distance_to_boundary(pts), -1.0)
        return complex(pts[int(np.argmax(d))])

    def shrink(self, delta):
        from shapely.geometry import Polygon as _SPolygon

        shp = _SPolygon([(p.real, p.imag) for p in self.vertices]).buffer(-delta, join_style=2)
        if shp.is_empty or shp.geom_type != "Polygon":
            raise RegionError("polygon vanishes or splits when shrunk")
        coords = list(shp.exterior.coords)[:-1]
        return Polygon(tuple(complex(x, y) for x, y in coords))

    def euclidean_diameter(self):
        v = np.array(self.vertices)
        return float(np.abs(v[:, None] - v[None, :]).max())

    def to_dict(self):
        return {"shape": "polygon", "vertices": [_cx_out(p) for p in self.vertices]}


@dataclass(frozen=True)
class AnnulusSector(Region):
    """``{center + r e^{i t} : r_in < r < r_out, theta0 < t < theta1}`` with ``0 < theta1 - theta0 <= 2 pi``."""

    center: complex
    r_in: float
    r_out: float
    theta0: float
    theta1: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not (0 < self.r_in < self.r_out):
            raise RegionError(f"need 0 < r_in < r_out, got {self.r_in}, {self.r_out}")
        span = self.theta1 - self.theta0
        if not (0 < span <= TWO_PI + 1e-12):
            raise RegionError(f"angular span must lie in (0, 2pi], got {span}")

    @property
    def span(self):
        return self.theta1 - self.theta0

    def _rel_angle(self, z):
        return np.mod(np.angle(z - self.center) - self.theta0, TWO_PI)

    def contains(self, z):
        z = _pts(z)
        r = np.abs(z - self.center)
        a = self._rel_angle(z)
        return (r > self.r_in) & (r < self.r_out) & (a > 0) & (a < self.span)

    def _corners(self):
        c = self.center
        e0, e1 = np.exp(1j * self.theta0), np.exp(1j * self.theta1)
        return c + self.r_in * e0, c + self.r_out * e0, c + self.r_in * e1, c + self.r_out * e1

    def distance_to_boundary(self, z):
        z = _pts(z)
        i0, o0, i1, o1 = self._corners()
        outer = Arc(self.center, self.r_out, self.theta0, self.theta1)
        inner = Arc(self.center, self.r_in, self.theta0, self.theta1)
        return np.minimum.reduce([
            np.abs(z - outer.closest(z)),
            np.abs(z - inner.closest(z)),
            _segment_distance(z, i0, o0),
            _segment_distance(z, i1, o1),
        ])

    def boundary(self):
        i0, o0, i1, o1 = self._corners()
        return Curve([
            Arc(self.center, self.r_out, self.theta0, self.theta1),
            Line(o1, i1),
            Arc(self.center, self.r_in, self.theta1, self.theta0),
            Line(i0, o0),
        ])

    def bbox(self):
        pts = list(self._corners())
        # axis extremes of the outer arc that fall inside the angular span
        for k in range(4):
            ang = k * np.pi / 2
            if np.mod(ang - self.theta0, TWO_PI) <= self.span:
                pts.append(self.center + self.r_out * np.exp(1j * ang))
        pts = np.array(pts)
        return pts.real.min(), pts.real.max(), pts.imag.min(), pts.imag.max()

    def interior_point(self):
        r = 0.5 * (self.r_in + self.r_out)
        return self.center + r * np.exp(1j * 0.5 * (self.theta0 + self.theta1))

    def shrink(self, delta):
        dt = delta / self.r_in
        return AnnulusSector(self.center, self.r_in + delta, self.r_out - delta,
                             self.theta0 + dt, self.theta1 - dt)

    def to_dict(self):
        return {"shape": "annulus_sector", "center": _cx_out(self.center), "r_in": self.r_in,
                "r_out": self.r_out, "theta0": self.theta0, "theta1": self.theta1}


@dataclass(frozen=True)
class HalfPlane(Region):
    """``{Re z < bound}``; unbounded, used only for metrics and conformal maps."""

    bound: float = 1.0

    convex = True
    bounded = False

    def contains(self, z):
        return _pts(z).real < self.bound

    def distance_to_boundary(self, z):
        return np.abs(self.bound - _pts(z).real)

    def boundary(self):
        raise UnsupportedShapeError("a half-plane has no bounded boundary curve")

    def bbox(self):
        return -np.inf, self.bound, -np.inf, np.inf

    def interior_point(self):
        return complex(self.bound - 1.0)

    def shrink(self, delta):
        return HalfPlane(self.bound - delta)

    def euclidean_diameter(self):
        return np.inf

    def to_dict(self):
        return {"shape": "halfplane", "bound": self.bound}


def region_from_dict(d: dict) -> Region:
    if not isinstance(d, dict) or "shape" not in d:
        raise ParseError(f"region must be an object with a 'shape' field, got {d!r}")
    shape = d["shape"]
    try:
        if shape == "disk":
            return Disk(parse_complex(d.get("center", 0.0)), float(d["radius"]))
        if shape == "rectangle":
            a, b = d["corners"]
            return Rectangle(parse_complex(a), parse_complex(b))
        if shape == "polygon":
            return Polygon(tuple(parse_complex(v) for v in d["vertices"]))
        if shape == "annulus_sector":
            return AnnulusSector(parse_complex(d.get("center", 0.0)), float(d["r_in"]),
                                 float(d["r_out"]), float(d["theta0"]), float(d["theta1"]))
        if shape == "halfplane":
            return HalfPlane(float(d.get("bound", 1.0)))
    except KeyError as exc:
        raise ParseError(f"region {shape!r} is missing field {exc.args[0]!r}") from None
    raise ParseError(f"unknown region shape {shape!r}")
