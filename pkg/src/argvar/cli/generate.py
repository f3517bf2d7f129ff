"""Deterministic random scenario suites.

Every scenario draws from its own counter-based stream: a Philox4x64-10
generator whose 128-bit key is the word pair ``(seed, code * 2**32 + index)``
with ``code`` the kind code below and ``index`` the scenario index.  The
256-bit counter starts at zero and is incremented before each block of four
64-bit outputs, so the first block is the Philox image of counter 1.  The
raw outputs are consumed in order (word 0 first) and a uniform in
``[0, 1)`` is ``(x >> 11) * 2**-53``.  The draw order of each recipe is the
order of the ``u()`` calls in its function; README.md lists the recipes in
prose.
"""

from __future__ import annotations

import math

import numpy as np

from ..holo import Affine, Const, Coord, Exp, HoloExpr, Power, Product, Sum, from_roots
from .scenario import Scenario, scenario_from_dict

KIND_CODES = {
    "growth_zeros": 1, "theorem1": 2, "theorem2": 3, "lemma1": 4, "lemma2": 5,
    "lemma3": 6, "koebe": 7, "eq14": 8,
    # acceptance batteries that are not scenario based
    "count": 9, "variation": 10, "blaschke": 11,
}
TWO_PI = 2.0 * math.pi


class Stream:
    """Uniform draws for scenario ``index`` of ``kind`` under ``seed``."""

    def __init__(self, seed: int, kind: str, index: int):
        if not 0 <= seed < 2 ** 64 or not 0 <= index < 2 ** 32:
            raise ValueError("seed must fit in 64 bits and index in 32 bits")
        key = np.array([seed, (KIND_CODES[kind] << 32) | index], dtype=np.uint64)
        self._bits = np.random.Philox(key=key)
        self.count = 0

    def raw(self) -> int:
        self.count += 1
        return int(self._bits.random_raw())

    def u(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.raw() >> 11) * 2.0 ** -53)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + min(int(self.u() * (hi - lo + 1)), hi - lo)

    def unit(self) -> complex:
        return complex(np.exp(1j * self.u(0.0, TWO_PI)))

    def in_disk(self, center: complex, radius: float) -> complex:
        """Area-uniform point: radius ``R sqrt(u1)`` then angle ``2 pi u2``."""
        r = radius * math.sqrt(self.u())
        return center + r * self.unit()


# -------------------------------------------------------------------------
# serialization helpers


def cx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def disk(c, r):
    return {"shape": "disk", "center": cx(c), "radius": r}


def lin_exp(alpha: complex) -> HoloExpr:
    """``exp(alpha z)``."""
    return Exp(Affine(Coord(), alpha, 0.0))


def times(*factors) -> HoloExpr:
    factors = [f for f in factors if f is not None]
    return factors[0] if len(factors) == 1 else Product(tuple(factors))


def poly(roots) -> HoloExpr | None:
    return from_roots(roots) if roots else None


def _draw_curve(rng: Stream, center: complex, radius: float):
    """Circle, polygon with jittered vertices, or analytic perturbed circle.

    Returns the curve as JSON and dense samples of it (for keeping roots off it).
    """
    kind = rng.integer(0, 2)
    if kind == 0:
        phase = rng.u(0.0, TWO_PI)
        d = {"circle": {"center": cx(center), "radius": radius, "start_angle": phase}}
        pts = center + radius * np.exp(1j * np.linspace(0, TWO_PI, 721))
        return d, pts
    if kind == 1:
        n = rng.integer(3, 8)
        phase = rng.u(0.0, TWO_PI)
        verts = []
        for j in range(n):
            ang = phase + TWO_PI * (j + rng.u(-0.25, 0.25)) / n
            verts.append(center + radius * rng.u(0.6, 1.0) * np.exp(1j * ang))
        closed = verts + verts[:1]
        pts = np.concatenate([np.linspace(a, b, 101) for a, b in zip(closed[:-1], closed[1:])])
        return {"polygon": [cx(v) for v in verts]}, pts
    m = rng.integer(1, 4)
    delta = radius * rng.u(0.05, 0.3) / (m + 1)
    phase = rng.unit()
    # t -> center + radius e^{2 pi i t} + delta e^{2 pi i (m+1) t}, t in [0, 1]
    path = Sum((Const(center),
                Product((Const(radius * phase), Exp(Affine(Coord(), 2j * math.pi, 0.0)))),
                Product((Const(delta), Exp(Affine(Coord(), 2j * math.pi * (m + 1), 0.0))))))
    t = np.linspace(0.0, 1.0, 721)
    pts = center + radius * phase * np.exp(2j * np.pi * t) + delta * np.exp(2j * np.pi * (m + 1) * t)
    return {"segments": [{"type": "analytic", "path": path.to_dict()}]}, pts


def _roots_off(rng: Stream, n: int, draw, keep, tries: int = 64):
    out = []
    for _ in range(n):
        for _ in range(tries):
            z = draw()
            if keep(z):
                out.append(z)
                break
    return out


def _off_curve(pts, margin):
    return lambda z: float(np.min(np.abs(pts - z))) >= margin


# -------------------------------------------------------------------------
# recipes


def _growth_zeros(rng: Stream, i: int) -> dict:
    R = rng.u(1.0, 3.0)
    concentric = rng.u() < 0.5
    r = R * rng.u(0.2, 0.7)
    c = 0j if concentric else (R - r) * rng.u(0.1, 0.8) * rng.unit()
    d = rng.integer(1, 8)
    roots = _roots_off(rng, d, lambda: rng.in_disk(0j, 0.98 * R),
                       lambda z: abs(abs(z - c) - r) >= 0.01 * R)
    return {"function": from_roots(roots).to_dict(),
            "geometry": {"K": disk(c, r), "U": disk(0j, R)},
            "checks": ["growth_zeros"]}


def _nested(rng: Stream):
    R = rng.u(2.0, 4.0)
    r1 = R * rng.u(0.5, 0.8)
    r2 = r1 * rng.u(0.5, 0.8)
    c2 = 0j if rng.u() < 0.5 else (r1 - r2) * rng.u(0.0, 0.5) * rng.unit()
    gamma, pts = _draw_curve(rng, c2, r2 * rng.u(0.3, 0.75))
    return R, r1, r2, c2, gamma, pts


def _theorem1(rng: Stream, i: int) -> dict:
    R, r1, r2, c2, gamma, pts = _nested(rng)
    alpha = rng.u(0.0, 1.0) * rng.unit()
    d = rng.integer(0, 6)
    roots = _roots_off(rng, d, lambda: rng.in_disk(0j, r1), _off_curve(pts, 0.02 * R))
    f = times(poly(roots), lin_exp(alpha))
    return {"function": f.to_dict(),
            "geometry": {"gamma": gamma, "U2": disk(c2, r2), "U1": disk(0j, r1), "U": disk(0j, R)},
            "checks": ["theorem1"]}


def _lemma1(rng: Stream, i: int) -> dict:
    R, r1, r2, c2, gamma, pts = _nested(rng)
    alpha = rng.u(0.0, 1.0) * rng.unit()
    d = rng.integer(0, 4)
    # zeros of F stay outside U1
    roots = [r1 * rng.u(1.05, 2.0) * rng.unit() for _ in range(d)]
    f = times(poly(roots), lin_exp(alpha))
    return {"function": f.to_dict(),
            "geometry": {"gamma": gamma, "U2": disk(c2, r2), "U1": disk(0j, r1)},
            "checks": ["lemma1"]}


def _lemma2(rng: Stream, i: int) -> dict:
    R = rng.u(2.0, 4.0)
    r1 = R * rng.u(0.4, 0.8)
    r2 = r1 * rng.u(0.3, 0.8)
    c2 = 0j if rng.u() < 0.5 else (r1 - r2) * rng.u(0.0, 0.5) * rng.unit()
    alpha = rng.u(0.0, 1.0) * rng.unit()
    d_in = rng.integer(1, 6)
    d_out = rng.integer(0, 2)
    inner = _roots_off(rng, d_in, lambda: rng.in_disk(0j, 0.98 * r1),
                       lambda z: abs(abs(z - c2) - r2) >= 0.02 * R)
    outer = [rng.u(1.02 * r1, 0.97 * R) * rng.unit() for _ in range(d_out)]
    f = times(poly(inner + outer), lin_exp(alpha))
    return {"function": f.to_dict(),
            "geometry": {"p_roots": [cx(z) for z in inner], "U2": disk(c2, r2), "U1": disk(0j, r1),
                         "U": disk(0j, R)},
            "checks": ["lemma2"]}


def _conformal(rng: Stream, checks):
    c = rng.in_disk(0j, 2.0)
    R = rng.u(0.5, 3.0)
    b = c + R * rng.u(0.0, 0.8) * rng.unit()
    cg = c + 0.5 * R * rng.u() * rng.unit()
    rg = (R - abs(cg - c)) * rng.u(0.2, 0.75)
    gamma, _ = _draw_curve(rng, cg, rg)
    return {"geometry": {"conformal": {"region": disk(c, R), "basepoint": cx(b)}, "gamma": gamma},
            "checks": checks}


def _lemma3(rng, i):
    return _conformal(rng, ["lemma3", "koebe"])


def _koebe(rng, i):
    return _conformal(rng, ["koebe"])


def _eq14(rng: Stream, i: int) -> dict:
    radius = rng.u(0.5, 2.0)
    gamma, pts = _draw_curve(rng, 0j, radius)
    d = rng.integer(1, 5)
    roots = _roots_off(rng, d, lambda: rng.in_disk(0j, 1.5 * radius), _off_curve(pts, 0.02 * radius))
    alpha = rng.u(0.0, 1.0) * rng.unit()
    beta = rng.u(0.0, 0.5) * rng.unit()
    g = Exp(Sum((Affine(Coord(), alpha, 0.0), Product((Const(beta), Power(Coord(), 2))))))
    p = from_roots(roots)
    return {"function": Product((p, g)).to_dict(),
            "geometry": {"p": p.to_dict(), "gamma": gamma},
            "checks": ["eq14"]}


def _theorem2(rng: Stream, i: int) -> dict:
    cover = {"kind": "log", "branch_point": [0.0, 0.0], "cut_angle": math.pi}
    rho = rng.u(1.0, 2.0)
    r2 = (rho * rng.u(0.6, 0.85), rho * rng.u(1.15, 1.4))
    r1 = (r2[0] * rng.u(0.6, 0.85), r2[1] * rng.u(1.1, 1.3))
    r0 = (r1[0] * rng.u(0.6, 0.85), r1[1] * rng.u(1.1, 1.3))
    ta = rng.u(-math.pi, math.pi)
    span = rng.u(3.0 * math.pi, 5.0 * math.pi)
    m2, m1, m0 = rng.u(0.3, 0.8), rng.u(0.2, 0.6), rng.u(0.2, 0.6)
    a2, b2 = ta - m2, ta + span + m2
    a1, b1 = a2 - m1, b2 + m1
    a0, b0 = a1 - m0, b1 + m0

    def ann(r, a, b):
        return {"lifted_annulus": {"r_in": r[0], "r_out": r[1], "theta_start": a, "theta_end": b}}

    # zeros in the covering coordinate w = log|z| + i theta, off the image Re w = log(rho) of gamma
    d = rng.integer(1, 4)
    roots = _roots_off(rng, d, lambda: complex(rng.u(math.log(r1[0]), math.log(r1[1])), rng.u(a1, b1)),
                       lambda w: abs(w.real - math.log(rho)) >= 0.05)
    z0 = rho * np.exp(1j * ta)
    sheet = int(round((ta - float(np.angle(z0))) / TWO_PI))
    gamma = {"curve": {"circle": {"center": [0.0, 0.0], "radius": rho, "start_angle": ta,
                                  "turns": span / TWO_PI}},
             "start_sheet": sheet}
    return {"cover": cover, "function": from_roots(roots).to_dict(),
            "geometry": {"gamma": gamma, "U2": ann(r2, a2, b2), "U1": ann(r1, a1, b1),
                         "U": ann(r0, a0, b0)},
            "checks": ["theorem2"],
            "grid": {"h": None, "connectivity": 48, "levels": 2}}


RECIPES = {
    "growth_zeros": _growth_zeros, "theorem1": _theorem1, "theorem2": _theorem2,
    "lemma1": _lemma1, "lemma2": _lemma2, "lemma3": _lemma3, "koebe": _koebe, "eq14": _eq14,
}


def scenario_dict(seed: int, kind: str, index: int) -> dict:
    rng = Stream(seed, kind, index)
    d = RECIPES[kind](rng, index)
    d["id"] = f"{kind}-{seed}-{index:04d}"
    d["seed"] = seed
    d.setdefault("tolerance", 1e-6)
    return d


def generate_suite(seed: int, n: int, kind: str, validate: bool = True) -> list[Scenario]:
    """``n`` reproducible scenarios of ``kind`` (any check name)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind not in RECIPES:
        raise ValueError(f"unknown suite kind {kind!r}; choose from {sorted(RECIPES)}")
    return [scenario_from_dict(scenario_dict(seed, kind, i), validate) for i in range(n)]
