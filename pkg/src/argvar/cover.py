"""Covering surfaces branched over one point: sheets, lifted curves and regions.

A point of the surface is a base point ``z`` together with an integer sheet
``k``.  Sheets are cut along the ray ``a + t*exp(i*beta)``, ``t > 0``; the
principal angle ``Theta(z)`` lies in ``(beta - 2*pi, beta]`` and the point
``(z, k)`` has unwrapped angle ``Theta(z) + 2*pi*k``.  On the log cover the
covering coordinate is ``w = log|z - a| + i*theta``; on the order ``m`` root
cover it is ``w = |z - a|**(1/m) * exp(i*theta/m)``.  Functions on the
surface are holomorphic expressions in ``w``.

Gluing between the pieces of a :class:`SurfaceRegion` is implicit: two
pieces meet across the cut when their sheets are consecutive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._config import max_refine
from .errors import (BranchPointError, ContainmentError, DisconnectedError, NonconvergenceError,
                     ParseError, RegionError, TangencyError)
from .geom.curves import Arc, Curve, Line, curve_extremum
from .geom.metric import Estimate, GridParams, grid_graph_diameter, intrinsic_diameter
from .geom.regions import AnnulusSector, Region, region_from_dict
from .holo import Affine, Compose, Const, Coord, Exp, HoloExpr, Log, _cx_out, parse_complex

TWO_PI = 2.0 * np.pi
BRANCH_TOL = 1e-9
KINDS = ("log", "root", "trivial")


@dataclass(frozen=True)
class CoverSpec:
    """Log, root or trivial cover of the plane, branched over ``branch_point``."""

    kind: str = "trivial"
    branch_point: complex = 0j
    order: int | None = None
    cut_angle: float = np.pi

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RegionError(f"cover kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "branch_point", complex(self.branch_point))
        if self.kind == "root":
            if self.order is None or int(self.order) != self.order or self.order < 2:
                raise RegionError(f"root cover needs an integer order >= 2, got {self.order!r}")
            object.__setattr__(self, "order", int(self.order))
        elif self.order is not None:
            raise RegionError("order is only meaningful for root covers")

    @property
    def trivial(self) -> bool:
        return self.kind == "trivial"

    def normalize(self, k):
        k = np.asarray(k, dtype=np.int64)
        if self.kind == "root":
            return np.mod(k, self.order)
        if self.kind == "trivial":
            return np.zeros_like(k)
        return k

    def principal_angle(self, z):
        """Angle of ``z - a`` in ``(beta - 2pi, beta]``."""
        arg = np.angle(np.asarray(z, dtype=complex) - self.branch_point)
        if self.cut_angle == np.pi:
            return arg
        return self.cut_angle - np.mod(self.cut_angle - arg, TWO_PI)

    def unwrapped_angle(self, z, k):
        return self.principal_angle(z) + TWO_PI * np.asarray(k)

    def sheet_of(self, z, theta):
        """Sheet label of base point ``z`` carrying the unwrapped angle ``theta``."""
        k = np.round((np.asarray(theta) - self.principal_angle(z)) / TWO_PI)
        return self.normalize(k.astype(np.int64))

    def lift_point(self, z0, k0, z1):
        """Sheet reached at ``z1`` from ``(z0, k0)`` along the straight segment."""
        if self.trivial:
            return np.zeros(np.broadcast(np.asarray(z0), np.asarray(z1)).shape, dtype=np.int64)
        a = self.branch_point
        z0 = np.asarray(z0, dtype=complex)
        z1 = np.asarray(z1, dtype=complex)
        theta = self.unwrapped_angle(z0, k0) + np.angle((z1 - a) / (z0 - a))
        return self.sheet_of(z1, theta)

    def coordinate_from_angle(self, z, theta):
        """Covering coordinate and its first two z-derivatives at unwrapped angle ``theta``."""
        z = np.asarray(z, dtype=complex)
        if self.trivial:
            return z, np.ones_like(z), np.zeros_like(z)
        u = z - self.branch_point
        if self.kind == "log":
            w = np.log(np.abs(u)) + 1j * np.asarray(theta)
            return w, 1.0 / u, -1.0 / (u * u)
        m = self.order
        w = np.abs(u) ** (1.0 / m) * np.exp(1j * np.asarray(theta) / m)
        w1 = w / (m * u)
        return w, w1, w1 * (1.0 / m - 1.0) / u

    def coordinate_jets(self, z, k):
        return self.coordinate_from_angle(z, self.unwrapped_angle(z, k))

    def coordinate_expr(self, k: int = 0) -> HoloExpr:
        """Covering coordinate on sheet ``k`` as a planar expression (valid off the cut)."""
        if self.trivial:
            return Coord()
        rot = np.exp(1j * (np.pi - self.cut_angle))
        L = Log(Affine(Coord(), rot, -self.branch_point * rot), int(k))
        if self.cut_angle != np.pi:
            L = L + Const(-1j * (np.pi - self.cut_angle))
        if self.kind == "log":
            return L
        return Exp(Const(1.0 / self.order) * L)

    def on_sheet(self, f: HoloExpr, k: int = 0) -> HoloExpr:
        """``f`` (an expression in the covering coordinate) seen on sheet ``k``."""
        if self.trivial:
            return f
        return Compose(f, self.coordinate_expr(k))

    def near_cut(self, z, tol=1e-12):
        if self.trivial:
            return np.zeros(np.shape(z), dtype=bool)
        u = (np.asarray(z, dtype=complex) - self.branch_point) * np.exp(-1j * self.cut_angle)
        return np.abs(np.angle(u)) < tol

    def to_dict(self):
        d = {"kind": self.kind, "branch_point": _cx_out(self.branch_point), "cut_angle": self.cut_angle}
        if self.kind == "root":
            d["order"] = self.order
        return d

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "kind" not in d:
            raise ParseError(f"cover must be an object with a 'kind' field, got {d!r}")
        return cls(d["kind"], parse_complex(d.get("branch_point", 0.0)),
                   d.get("order"), float(d.get("cut_angle", np.pi)))


@dataclass(frozen=True)
class SheetPoint:
    base: complex
    sheet: int = 0


def shift_sheets(obj, s: int):
    """Apply the deck transformation ``k -> k + s`` to a surface region or curve."""
    return obj.shift_sheets(s)


# -------------------------------------------------------------------------
# regions


class SurfaceRegion:
    """Union of sheet-tagged planar pieces on a cover.

    Parameters
    ----------
    cover : CoverSpec
    pieces : sequence of (int, Region)
        A piece may touch the cut along its boundary but must not cross it;
        pieces on consecutive sheets that touch the cut from opposite sides
        are glued there.
    """

    def __init__(self, cover: CoverSpec, pieces):
        self.cover = cover
        norm = []
        for k, reg in pieces:
            if not isinstance(reg, Region) or not reg.bounded:
                raise RegionError("surface pieces must be bounded planar regions")
            norm.append((int(cover.normalize(k)), reg))
        if not norm:
            raise RegionError("a surface region needs at least one piece")
        self.pieces = tuple(norm)
        if not cover.trivial:
            for k, reg in self.pieces:
                self._check_piece(reg)

    def _check_piece(self, reg):
        a, beta = self.cover.branch_point, self.cover.cut_angle
        if bool(reg.contains(a)) or float(reg.distance_to_boundary(a)) < BRANCH_TOL:
            raise BranchPointError("surface piece contains or touches the branch point")
        x0, x1, y0, y1 = reg.bbox()
        corners = np.array([x0 + 1j * y0, x1 + 1j * y0, x0 + 1j * y1, x1 + 1j * y1])
        t = np.linspace(0.0, float(np.abs(corners - a).max()), 4097)[1:]
        ray = a + t * np.exp(1j * beta)
        deep = reg.contains(ray) & (reg.distance_to_boundary(ray) > 1e-9 * reg.scale)
        if np.any(deep):
            raise RegionError("surface piece crosses the cut; split it along the cut")

    @cached_property
    def scale(self) -> float:
        return max(reg.scale for _, reg in self.pieces)

    @property
    def sheets(self):
        return sorted({k for k, _ in self.pieces})

    def _plain_contains(self, z, k):
        k = self.cover.normalize(k)
        out = np.zeros(np.broadcast(z, k).shape, dtype=bool)
        for s, reg in self.pieces:
            out |= (k == s) & reg.contains(z)
        return out

    def contains(self, z, k):
        """Membership of lifted points ``(z, k)``; points on a glued cut count as inside."""
        z = np.asarray(z, dtype=complex)
        k = np.broadcast_to(np.asarray(k, dtype=np.int64), z.shape)
        out = self._plain_contains(z, k)
        cut = self.cover.near_cut(z) & ~out
        if np.any(cut):
            a = self.cover.branch_point
            zc, kc = z[cut], k[cut]
            theta = self.cover.unwrapped_angle(zc, kc)
            both = np.ones(zc.shape, dtype=bool)
            for s in (-1e-9, 1e-9):
                zs = a + np.abs(zc - a) * np.exp(1j * (theta + s))
                both &= self._plain_contains(zs, self.cover.sheet_of(zs, theta + s))
            out[cut] = both
        return out

    def shrunk_pieces(self, delta: float | None = None):
        """Pieces shrunk by ``delta`` so that every sampled point has an unambiguous sheet."""
        if delta is None:
            delta = 0.0 if self.cover.trivial else 1e-11 * self.scale
        if delta == 0.0:
            return list(self.pieces)
        return [(k, reg.shrink(delta)) for k, reg in self.pieces]

    def shift_sheets(self, s: int) -> "SurfaceRegion":
        return SurfaceRegion(self.cover, [(k + s, reg) for k, reg in self.pieces])

    @cached_property
    def genuine_boundary(self):
        """Boundary pieces not glued to another piece, as sheet-tagged sub-segments."""
        eta = 1e-6 * self.scale
        lines, arcs = [], []
        for k, reg in self.pieces:
            for seg in reg.boundary().segments:
                n_sub = 48 if isinstance(seg, Arc) else 16
                edges = np.linspace(0.0, 1.0, n_sub + 1)
                mids = 0.5 * (edges[:-1] + edges[1:])
                m, tan, _ = seg.jets(mids)
                nrm = -1j * tan / np.abs(tan)
                inset = m - eta * nrm
                probe = m + eta * nrm
                kp = self.cover.lift_point(inset, np.full(mids.shape, k), probe)
                glued = self.contains(probe, kp)
                for j in np.nonzero(~glued)[0]:
                    if isinstance(seg, Line):
                        p0, p1 = seg.point(np.array([edges[j], edges[j + 1]]))
                        lines.append((p0, p1, nrm[j], k))
                    else:
                        th0 = seg.theta0 + seg.sweep * edges[j]
                        th1 = seg.theta0 + seg.sweep * edges[j + 1]
                        arcs.append((seg.center, seg.radius, min(th0, th1), max(th0, th1),
                                     np.sign(seg.sweep), k))
        return _BoundaryTable(lines, arcs)

    def to_dict(self):
        return {"pieces": [{"sheet": int(k), "region": reg.to_dict()} for k, reg in self.pieces]}

    @classmethod
    def from_dict(cls, d, cover: CoverSpec):
        if isinstance(d, dict) and "lifted_annulus" in d:
            la = d["lifted_annulus"]
            try:
                return lifted_annulus_sector(cover, float(la["r_in"]), float(la["r_out"]),
                                             float(la["theta_start"]), float(la["theta_end"]))
            except KeyError as exc:
                raise ParseError(f"lifted_annulus is missing field {exc.args[0]!r}") from None
        if isinstance(d, dict) and "pieces" in d:
            return cls(cover, [(int(p.get("sheet", 0)), region_from_dict(p["region"]))
                               for p in d["pieces"]])
        if isinstance(d, dict) and "shape" in d:
            return cls(cover, [(0, region_from_dict(d))])
        raise ParseError(f"surface region needs 'pieces', 'lifted_annulus' or 'shape', got {d!r}")

    def __repr__(self):
        return f"SurfaceRegion({self.cover.kind}, sheets={self.sheets}, {len(self.pieces)} pieces)"


class _BoundaryTable:
    """Vectorized closest-point queries against sheet-tagged lines and arcs."""

    def __init__(self, lines, arcs):
        self.n = len(lines) + len(arcs)
        if lines:
            p0, p1, nrm, k = (np.array(c) for c in zip(*lines))
            self.l_p0, self.l_d, self.l_n, self.l_k = p0, p1 - p0, nrm, k.astype(np.int64)
        else:
            self.l_p0 = None
        if arcs:
            c, r, lo, hi, sg, k = (np.array(x) for x in zip(*arcs))
            self.a_c, self.a_r, self.a_lo, self.a_hi = c, r, lo, hi
            self.a_sign, self.a_k = sg, k.astype(np.int64)
        else:
            self.a_c = None

    def closest(self, z):
        """Closest points, outward normals and sheet labels, each of shape (N, M)."""
        z = np.asarray(z, dtype=complex)[:, None]
        cs, ns, ks = [], [], []
        if self.l_p0 is not None:
            p0, d = self.l_p0[None, :], self.l_d[None, :]
            s = np.clip(np.real((z - p0) * np.conj(d)) / np.abs(d) ** 2, 0.0, 1.0)
            cs.append(p0 + s * d)
            ns.append(np.broadcast_to(self.l_n[None, :], cs[-1].shape))
            ks.append(np.broadcast_to(self.l_k[None, :], cs[-1].shape))
        if self.a_c is not None:
            c, r = self.a_c[None, :], self.a_r[None, :]
            lo, hi = self.a_lo[None, :], self.a_hi[None, :]
            ang = lo + np.mod(np.angle(z - c) - lo, TWO_PI)
            inside = ang <= hi
            e_on, e_lo, e_hi = np.exp(1j * ang), np.exp(1j * lo), np.exp(1j * hi)
            p_lo, p_hi = c + r * e_lo, c + r * e_hi
            use_lo = np.abs(z - p_lo) <= np.abs(z - p_hi)
            e = np.where(inside, e_on, np.where(use_lo, e_lo, e_hi))
            cs.append(c + r * e)
            ns.append(self.a_sign[None, :] * e)
            ks.append(np.broadcast_to(self.a_k[None, :], cs[-1].shape))
        return np.concatenate(cs, axis=1), np.concatenate(ns, axis=1), np.concatenate(ks, axis=1)


def lifted_annulus_sector(cover: CoverSpec, r_in: float, r_out: float, theta_start: float,
                          theta_end: float) -> SurfaceRegion:
    """Annulus ``r_in < |z - a| < r_out`` over the unwrapped angles ``(theta_start, theta_end)``.

    The range is split at the cut into one annulus-sector piece per sheet.
    """
    if cover.trivial:
        raise RegionError("lifted annuli need a branched cover")
    if not theta_end > theta_start:
        raise RegionError("need theta_end > theta_start")
    if cover.kind == "root" and theta_end - theta_start > TWO_PI * cover.order:
        raise RegionError("angular span exceeds the number of sheets of the root cover")
    beta = cover.cut_angle
    k_lo = int(np.floor((theta_start - (beta - TWO_PI)) / TWO_PI))
    pieces = []
    k = k_lo
    while True:
        lo = max(theta_start, beta - TWO_PI + TWO_PI * k)
        hi = min(theta_end, beta + TWO_PI * k)
        if lo >= theta_end:
            break
        if hi - lo > 1e-12:
            pieces.append((k, AnnulusSector(cover.branch_point, r_in, r_out,
                                            lo - TWO_PI * k, hi - TWO_PI * k)))
        k += 1
    return SurfaceRegion(cover, pieces)


# -------------------------------------------------------------------------
# curves


class SurfaceCurve:
    """Planar curve lifted to a cover from ``start_sheet``.

    A table of unwrapped angles at knots (consecutive knots differ by less
    than pi/8 in angle) makes the lift exact at every parameter: between
    knots the angle is continued by the principal argument of a ratio.
    """

    def __init__(self, cover: CoverSpec, curve: Curve, start_sheet: int = 0):
        self.cover = cover
        self.curve = curve
        self.start_sheet = int(cover.normalize(start_sheet))
        self._tables = [] if cover.trivial else self._build_tables()

    def _build_tables(self):
        a = self.cover.branch_point
        segs = self.curve.segments
        dmin, _, _ = curve_extremum(self.curve, lambda i, t: np.abs(segs[i].point(t) - a),
                                    mode="min", rtol=1e-6, atol=1e-12)
        if dmin < BRANCH_TOL:
            raise BranchPointError(f"curve passes within {dmin:.3g} of the branch point")
        theta = float(self.cover.unwrapped_angle(self.curve.start, self.start_sheet))
        tables = []
        for seg in segs:
            n = 64
            for _ in range(max_refine() + 1):
                t = np.linspace(0.0, 1.0, n + 1)
                z = seg.point(t)
                steps = np.angle((z[1:] - a) / (z[:-1] - a))
                if np.max(np.abs(steps)) < np.pi / 8:
                    break
                n *= 2
            else:
                raise NonconvergenceError("angle table did not resolve the winding of a segment")
            # the segment starts where the previous one ended
            theta = theta + float(np.angle((z[0] - a) / (tables[-1][2][-1] - a))) if tables else theta
            th = theta + np.concatenate([[0.0], np.cumsum(steps)])
            tables.append((t, th, z))
            theta = float(th[-1])
        return tables

    def angle_at(self, i, t):
        """Unwrapped angle of segment ``i`` at parameters ``t``."""
        tk, th, zk = self._tables[i]
        t = np.asarray(t, dtype=float)
        j = np.clip(np.searchsorted(tk, t, side="right") - 1, 0, len(tk) - 2)
        z = self.curve.segments[i].point(t)
        a = self.cover.branch_point
        return th[j] + np.angle((z - a) / (zk[j] - a))

    def sheet_at(self, i, t):
        t = np.asarray(t, dtype=float)
        if self.cover.trivial:
            return np.zeros(t.shape, dtype=np.int64)
        z = self.curve.segments[i].point(t)
        return self.cover.sheet_of(z, self.angle_at(i, t))

    def coordinate_jets(self, i, t):
        """Covering coordinate ``w`` and ``dw/dz``, ``d2w/dz2`` along segment ``i``."""
        z = self.curve.segments[i].point(t)
        theta = None if self.cover.trivial else self.angle_at(i, t)
        return self.cover.coordinate_from_angle(z, theta)

    @property
    def end_sheet(self) -> int:
        return int(self.sheet_at(len(self.curve.segments) - 1, np.array([1.0]))[0])

    @cached_property
    def transitions(self):
        """Cut crossings as ``(segment, t, from_sheet, to_sheet)``."""
        out = []
        if self.cover.trivial:
            return out
        beta = self.cover.cut_angle
        for i, (tk, _, _) in enumerate(self._tables):
            s = self.sheet_at(i, tk)
            for j in np.nonzero(s[1:] != s[:-1])[0]:
                lo, hi = tk[j], tk[j + 1]
                s_lo = s[j]
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    if self.sheet_at(i, np.array([mid]))[0] == s_lo:
                        lo = mid
                    else:
                        hi = mid
                tc = 0.5 * (lo + hi)
                vel = self.curve.segments[i].tangent(tc)
                if abs((vel * np.exp(-1j * beta)).imag) < 1e-9 * abs(vel):
                    raise TangencyError(f"curve is tangent to the cut at segment {i}, t={tc:.6g}")
                out.append((i, tc, int(s[j]), int(s[j + 1])))
        return out

    def reversed(self) -> "SurfaceCurve":
        return SurfaceCurve(self.cover, self.curve.reversed(), self.end_sheet)

    def shift_sheets(self, s: int) -> "SurfaceCurve":
        return SurfaceCurve(self.cover, self.curve, self.start_sheet + s)

    def sample(self, n=256):
        """Base points and sheets of about ``n`` points along the curve."""
        zs, ks = [], []
        for i, t in enumerate(self.curve.param_grid(n)):
            zs.append(self.curve.segments[i].point(t))
            ks.append(self.sheet_at(i, t))
        return np.concatenate(zs), np.concatenate(ks)

    def to_dict(self):
        return {"curve": self.curve.to_dict(), "start_sheet": self.start_sheet}

    @classmethod
    def from_dict(cls, d, cover: CoverSpec):
        if isinstance(d, dict) and "curve" in d:
            return cls(cover, Curve.from_dict(d["curve"]), int(d.get("start_sheet", 0)))
        return cls(cover, Curve.from_dict(d), 0)

    def __repr__(self):
        return f"SurfaceCurve({self.cover.kind}, start_sheet={self.start_sheet}, {self.curve!r})"


def lift_curve(gamma: Curve, cover: CoverSpec, start_sheet: int = 0) -> SurfaceCurve:
    """Lift a planar curve to ``cover`` starting on ``start_sheet``.

    Raises
    ------
    BranchPointError
        If the curve comes within 1e-9 of the branch point.
    TangencyError
        If the curve crosses the cut tangentially (raised when transitions are listed).
    """
    sc = SurfaceCurve(cover, gamma, start_sheet)
    sc.transitions  # noqa: B018 - validates crossings eagerly
    return sc


# -------------------------------------------------------------------------
# pi-gap and intrinsic diameter


def _eps_at(U: SurfaceRegion, z, k):
    """Signed injectivity radius at lifted points (negative outside ``U``)."""
    cover = U.cover
    z = np.asarray(z, dtype=complex)
    k = np.asarray(k, dtype=np.int64)
    table = U.genuine_boundary
    cap = np.full(z.shape, np.inf) if cover.trivial else np.abs(z - cover.branch_point)
    inside = U.contains(z, k)
    if table.n == 0:
        return np.where(inside, cap, 0.0)
    eta = 1e-7 * U.scale
    c, nrm, kc = table.closest(z)
    d = np.abs(z[:, None] - c)
    match = cover.lift_point(z[:, None], k[:, None], c - eta * nrm) == kc
    d_match = np.where(match, d, np.inf).min(axis=1)
    eps = np.minimum(cap, d_match)
    return np.where(inside, eps, -d.min(axis=1))


def _finish(value, scale, what):
    if value < -1e-9 * max(1.0, scale):
        raise ContainmentError(f"{what} is not contained in U (signed pi-gap {value:.3g})")
    return max(float(value), 0.0)


def pi_gap(K, U: SurfaceRegion) -> float:
    """Smallest injectivity radius of the projection over points of ``K`` inside ``U``.

    ``K`` is a :class:`SurfaceCurve`, a :class:`SurfaceRegion` on the same
    cover, or (for the trivial cover) a planar curve or region.  At a point
    ``p`` the radius is the distance from ``p`` to the unglued boundary of
    ``U`` on the sheet reached from ``p``, capped by the distance to the
    branch point.  The minimum over a region is attained on its boundary,
    which is sampled with doubling until two levels agree to 1e-6.
    """
    if isinstance(K, Curve):
        K = SurfaceCurve(U.cover, K, 0)
    elif isinstance(K, Region):
        K = SurfaceRegion(U.cover, [(0, K)])
    scale = U.scale
    if isinstance(K, SurfaceCurve):
        segs = K.curve.segments

        def fun(i, t):
            return _eps_at(U, segs[i].point(t), K.sheet_at(i, t))

        value, _, _ = curve_extremum(K.curve, fun, mode="min", rtol=1e-6, atol=1e-12 * scale)
        return _finish(value, scale, "curve")
    if not isinstance(K, SurfaceRegion):
        raise TypeError(f"cannot take the pi-gap of {type(K).__name__}")
    best = np.inf
    for k, reg in K.shrunk_pieces():
        bd = reg.boundary()
        segs = bd.segments

        def fun(i, t, k=k):
            z = segs[i].point(t)
            return _eps_at(U, z, np.full(z.shape, k))

        value, _, _ = curve_extremum(bd, fun, mode="min", rtol=1e-6, atol=1e-12 * scale)
        best = min(best, value)
    return _finish(best, scale, "K")


def surface_intrinsic_diameter(K: SurfaceRegion, grid: GridParams | None = None,
                               method: str = "auto") -> Estimate:
    """Intrinsic diameter of a surface region for the metric lifted from the plane.

    Grid nodes carry sheet labels; an edge between neighbouring nodes is
    kept when its interior samples, lifted along the edge, stay in ``K``.
    """
    grid = grid or GridParams()
    if K.cover.trivial and len(K.pieces) == 1:
        return intrinsic_diameter(K.pieces[0][1], grid, method)
    if method == "auto" and len(K.pieces) == 1 and K.pieces[0][1].convex:
        return Estimate(float(K.pieces[0][1].euclidean_diameter()), 0.0, 0.0)
    h = grid.h or K.scale / 48.0
    a = K.cover.branch_point if not K.cover.trivial else 0j
    values = []
    for level in range(grid.levels):
        hl = h / 2 ** level
        origin = a + 0.5 * hl * (1 + 1j)
        ijs, ks = [], []
        for k, reg in K.pieces:
            x0, x1, y0, y1 = reg.bbox()
            i = np.arange(int(np.floor((x0 - origin.real) / hl)), int(np.ceil((x1 - origin.real) / hl)) + 1)
            j = np.arange(int(np.floor((y0 - origin.imag) / hl)), int(np.ceil((y1 - origin.imag) / hl)) + 1)
            I, J = np.meshgrid(i, j, indexing="ij")
            I, J = I.ravel(), J.ravel()
            inside = reg.contains(origin + hl * (I + 1j * J))
            ijs.append(np.stack([I[inside], J[inside]], axis=1))
            ks.append(np.full(int(inside.sum()), k))
        ij = np.concatenate(ijs)
        kk = np.concatenate(ks)
        _, uniq = np.unique(np.column_stack([kk, ij]), axis=0, return_index=True)
        ij, kk = ij[uniq], kk[uniq]
        try:
            values.append(grid_graph_diameter(ij, kk, origin, hl, K.contains, K.cover.lift_point,
                                              grid.connectivity))
        except DisconnectedError:
            if level == grid.levels - 1:
                raise
            values.append(np.nan)
    fine = values[-1]
    err = abs(fine - values[-2]) if len(values) > 1 else hl
    if not np.isfinite(err):
        err = hl
    return Estimate(fine, float(err), hl)
