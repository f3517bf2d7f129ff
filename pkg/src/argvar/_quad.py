"""Vectorized quadrature and extremum search on parameter intervals."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ._config import max_refine
from .errors import NonconvergenceError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def gauss_legendre(fun, a, b, rtol=1e-13):
    """Composite 20-point Gauss-Legendre with panel doubling until two levels agree."""
    if b <= a:
        return 0.0
    prev = None
    panels = 1
    for _ in range(max_refine() + 1):
        edges = np.linspace(a, b, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        t = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        vals = np.asarray(fun(t), dtype=float).reshape(panels, -1)
        total = float(np.sum(vals * _GL_W[None, :] * half[:, None]))
        if prev is not None and abs(total - prev) <= rtol * max(1.0, abs(total)):
            return total
        prev = total
        panels *= 2
    raise NonconvergenceError("Gauss-Legendre quadrature did not converge")


def sign_change_points(fun, a, b, n=513):
    """Parameters in (a, b) where the real function ``fun`` changes sign."""
    t = np.linspace(a, b, n)
    s = np.asarray(fun(t), dtype=float)
    roots = []
    for i in range(n - 1):
        if s[i] == 0.0:
            if 0 < i:
                roots.append(t[i])
            continue
        if s[i] * s[i + 1] < 0.0:
            roots.append(brentq(lambda x: float(fun(np.array([x]))[0]), t[i], t[i + 1], xtol=1e-15))
    return roots


def abs_integral(fun, a=0.0, b=1.0):
    """Integral of ``|fun|`` over [a, b], split at the sign changes of ``fun``."""
    cuts = [a, *sign_change_points(fun, a, b), b]
    return sum(abs(gauss_legendre(fun, lo, hi)) for lo, hi in zip(cuts[:-1], cuts[1:]) if hi > lo)


def polish_max(fun, lo, hi, start_value):
    """Refine a sampled maximum of a scalar function on [lo, hi]."""
    if hi <= lo:
        return start_value, lo
    res = minimize_scalar(lambda x: -float(fun(np.array([x]))[0]), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-13 * max(1.0, abs(hi))})
    if -res.fun > start_value:
        return float(-res.fun), float(res.x)
    return start_value, None
