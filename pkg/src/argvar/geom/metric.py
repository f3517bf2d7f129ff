"""Gaps and intrinsic diameters.

The intrinsic diameter is approximated by shortest paths on a square grid
graph restricted to the set.  Edges join nodes whose offset ``(di, dj)`` is
a primitive vector with ``max(|di|, |dj|) <= k``; larger stencils follow
straight segments in more directions and cut the metric bias of the plain
8-neighbour graph (about 8% in the worst direction) to a fraction of a percent.
The same machinery serves multi-sheet surfaces through a ``lift`` callback.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from ..errors import ContainmentError, DisconnectedError, RegionError
from .curves import Curve, curve_extremum
from .regions import Disk, Polygon, Rectangle, Region

GAP_RTOL = 1e-6
# connectivity -> maximal stencil offset
_STENCILS = {8: 1, 16: 2, 32: 3, 48: 4}


@dataclass(frozen=True)
class GridParams:
    """Grid discretization for intrinsic diameters.

    Parameters
    ----------
    h : float or None
        Cell size at the coarse level; ``None`` picks ``scale / 48``.
    connectivity : int
        Number of neighbours per node: 8, 16, 32 or 48.
    levels : int
        Number of refinement levels (each halves ``h``); at least 2 for an
        error estimate.
    """

    h: float | None = None
    connectivity: int = 48
    levels: int = 2

    def __post_init__(self):
        if self.h is not None and not self.h > 0:
            raise RegionError(f"grid cell size must be positive, got {self.h}")
        if self.connectivity not in _STENCILS:
            raise RegionError(f"connectivity must be one of {sorted(_STENCILS)}")
        if self.levels < 1:
            raise RegionError("need at least one grid level")

    def to_dict(self):
        return {"h": self.h, "connectivity": self.connectivity, "levels": self.levels}


@dataclass(frozen=True)
class Estimate:
    """A numerical value with an error estimate and the finest cell size used."""

    value: float
    error: float
    h: float = 0.0

    def __float__(self):
        return float(self.value)


def stencil(connectivity: int):
    k = _STENCILS[connectivity]
    out = []
    for di in range(-k, k + 1):
        for dj in range(-k, k + 1):
            if (di, dj) != (0, 0) and gcd(abs(di), abs(dj)) == 1:
                out.append((di, dj))
    return out


def grid_graph_diameter(nodes_ij, sheets, origin, h, member, lift, connectivity, max_sources=32):
    """Shortest-path diameter of a grid graph.

    Parameters
    ----------
    nodes_ij : (N, 2) int array
        Grid indices; the node sits at ``origin + h*(i + 1j*j)``.
    sheets : (N,) int array
        Sheet label of each node (all zero in the plane).
    member : callable
        ``member(z, k) -> bool array``, membership of lifted points.
    lift : callable
        ``lift(z0, k0, z1) -> k1``, sheet of ``z1`` reached along the segment from ``(z0, k0)``.

    Returns
    -------
    float
        Largest shortest-path distance between nodes.

    Raises
    ------
    DisconnectedError
        If the graph has more than one component.
    """
    n = len(sheets)
    if n < 2:
        raise DisconnectedError("grid has fewer than two nodes; refine h")
    ii, jj = nodes_ij[:, 0].astype(np.int64), nodes_ij[:, 1].astype(np.int64)
    sh = np.asarray(sheets, dtype=np.int64)
    base = 1 << 20
    off = 1 << 19

    def code(k, i, j):
        return ((k + off) * base + (i + off)) * base + (j + off)

    codes = code(sh, ii, jj)
    order = np.argsort(codes)
    sorted_codes = codes[order]
    z = origin + h * (ii + 1j * jj)

    rows, cols, wts = [], [], []
    for di, dj in stencil(connectivity):
        if (di, dj) < (0, 0):
            continue  # each undirected edge once
        z1 = z + h * (di + 1j * dj)
        k1 = lift(z, sh, z1)
        c1 = code(k1, ii + di, jj + dj)
        pos = np.searchsorted(sorted_codes, c1)
        pos = np.minimum(pos, n - 1)
        hit = sorted_codes[pos] == c1
        src = np.nonzero(hit)[0]
        if src.size == 0:
            continue
        dst = order[pos[hit]]
        ok = np.ones(src.size, dtype=bool)
        m = max(2, int(np.ceil(2 * max(abs(di), abs(dj)))))
        for s in (np.arange(1, m) / m):
            zs = z[src] + s * h * (di + 1j * dj)
            ok &= member(zs, lift(z[src], sh[src], zs))
        w = h * np.hypot(di, dj)
        rows.append(src[ok])
        cols.append(dst[ok])
        wts.append(np.full(int(ok.sum()), w))
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=int)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=int)
    wts = np.concatenate(wts) if wts else np.zeros(0)
    graph = coo_matrix((wts, (rows, cols)), shape=(n, n)).tocsr()
    ncomp, _ = connected_components(graph, directed=False)
    if ncomp > 1:
        raise DisconnectedError(f"grid graph has {ncomp} components at h={h:g}")

    # the diameter is realized between boundary nodes (fewer than 8 neighbours)
    deg = np.bincount(np.concatenate([rows, cols]), minlength=n)
    boundary = np.nonzero(deg < np.max(deg))[0]
    if boundary.size == 0:
        boundary = np.arange(n)
    idx = np.linspace(0, boundary.size - 1, min(max_sources, boundary.size)).round().astype(int)
    sources = np.unique(boundary[idx])
    dist = dijkstra(graph, directed=False, indices=sources)
    best = float(dist.max())
    # second sweep from the farthest targets of the first
    far = np.unique(np.argsort(dist.max(axis=0))[-16:])
    dist2 = dijkstra(graph, directed=False, indices=far)
    return max(best, float(dist2.max()))


def _planar_nodes(K: Region, h: float):
    x0, x1, y0, y1 = K.bbox()
    origin = complex(x0, y0) + 0.5 * h * (1 + 1j) * 0.61803398875
    ni = int(np.ceil((x1 - x0) / h)) + 1
    nj = int(np.ceil((y1 - y0) / h)) + 1
    I, J = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    I, J = I.ravel(), J.ravel()
    inside = K.contains(origin + h * (I + 1j * J))
    return np.stack([I[inside], J[inside]], axis=1), origin


def _default_h(K) -> float:
    return K.scale / 48.0


def intrinsic_diameter(K: Region, grid: GridParams | None = None, method: str = "auto") -> Estimate:
    """Intrinsic (inner path-metric) diameter of a planar region.

    For convex regions and ``method="auto"`` the intrinsic and Euclidean
    diameters coincide and the closed form is returned with zero error.
    Otherwise shortest paths on a grid graph are computed at ``h`` and at
    each halving; the error is the difference of the last two levels.
    """
    grid = grid or GridParams()
    if method not in ("auto", "grid"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto" and K.convex:
        return Estimate(float(K.euclidean_diameter()), 0.0, 0.0)
    h = grid.h or _default_h(K)

    def member(z, k):
        return K.contains(z)

    def lift(z0, k0, z1):
        return k0

    values = []
    for level in range(grid.levels):
        hl = h / 2 ** level
        nodes, origin = _planar_nodes(K, hl)
        try:
            values.append(grid_graph_diameter(nodes, np.zeros(len(nodes), dtype=int), origin, hl,
                                              member, lift, grid.connectivity))
        except DisconnectedError:
            if level == grid.levels - 1:
                raise
            values.append(np.nan)
    fine = values[-1]
    err = abs(fine - values[-2]) if len(values) > 1 else hl
    if not np.isfinite(err):
        err = hl
    return Estimate(fine, float(err), hl)


# -------------------------------------------------------------------------
# gaps


def _signed_distance(U: Region, z):
    d = U.distance_to_boundary(z)
    return np.where(U.contains(z), d, -d)


def _finish_gap(value, scale, what):
    tol = 1e-9 * max(1.0, scale)
    if value < -tol:
        raise ContainmentError(f"{what} is not contained in U (signed gap {value:.3g})")
    return max(float(value), 0.0)


def gap_curve(gamma: Curve, U: Region) -> float:
    """Smallest Euclidean distance from points of ``gamma`` to the boundary of ``U``."""
    segs = gamma.segments

    def fun(i, t):
        return _signed_distance(U, segs[i].point(t))

    scale = U.scale if U.bounded else abs(gamma.start) + 1.0
    value, _, _ = curve_extremum(gamma, fun, mode="min", rtol=GAP_RTOL, atol=1e-12 * scale)
    return _finish_gap(value, scale, "curve")


def _closed_form_gap(K: Region, U: Region):
    if isinstance(U, Disk):
        if isinstance(K, Disk):
            return U.radius - abs(K.center - U.center) - K.radius
        if isinstance(K, (Rectangle, Polygon)):
            v = np.array(K.vertices)
            return U.radius - float(np.abs(v - U.center).max())
    if isinstance(U, Rectangle):
        lo, hi = U.corner1, U.corner2
        if isinstance(K, Disk):
            c, r = K.center, K.radius
            return min(c.real - lo.real, hi.real - c.real, c.imag - lo.imag, hi.imag - c.imag) - r
        if isinstance(K, (Rectangle, Polygon)):
            v = np.array(K.vertices)
            return float(min((v.real - lo.real).min(), (hi.real - v.real).min(),
                             (v.imag - lo.imag).min(), (hi.imag - v.imag).min()))
    return None


def gap(K, U: Region) -> float:
    """Smallest distance from a point of ``K`` to the boundary of ``U``.

    ``K`` may be a region or a curve.  Disk/rectangle/polygon-in-disk and
    rectangle pairs use closed forms; other pairs sample the boundary of
    ``K`` (where the minimum is attained) with refinement.
    """
    if isinstance(K, Curve):
        return gap_curve(K, U)
    closed = _closed_form_gap(K, U)
    if closed is not None:
        return _finish_gap(closed, U.scale, "K")
    return _finish_gap(gap_curve(K.boundary(), U) if _inside(K, U) else -np.inf, U.scale, "K")


def _inside(K: Region, U: Region) -> bool:
    pts = K.boundary().sample(512)
    return bool(np.all(_signed_distance(U, pts) > -1e-9 * max(1.0, U.scale)))
