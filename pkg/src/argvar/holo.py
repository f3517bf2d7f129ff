"""Holomorphic expressions with exact first and second derivatives.

Every expression node propagates a ``(value, first, second)`` derivative
triple through its children, so derivatives are exact up to floating point
rounding rather than finite-difference approximations.  Nodes are immutable
and evaluation is vectorized over numpy arrays of complex points.

Example
-------
>>> z = coord()
>>> eval_jet(z**2, 1 + 1j)
Jet2(value=2j, d1=(2+2j), d2=(2+0j))
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, ParseError, ZeroValueError

#: Default zero tolerance, relative to the local scale ``1 + |f'|``.
ZERO_TOL = 1e-12

TWO_PI = 2.0 * np.pi


class Jet2(NamedTuple):
    """Value and first two complex derivatives at one point."""

    value: complex
    d1: complex
    d2: complex


def _as_points(z):
    return np.atleast_1d(np.asarray(z, dtype=complex))


def _check_nonzero(v, d1, node, z, zero_tol, what):
    bad = ~(np.abs(v) > zero_tol * (1.0 + np.abs(d1)))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise DomainError(f"{what} vanishes at z={complex(z[i])!r} in node {node!r}")


class HoloExpr:
    """Base class of expression nodes.

    Subclasses implement ``_jets(z, zero_tol)`` returning three complex
    arrays shaped like ``z``.
    """

    __slots__ = ()

    def _jets(self, z, zero_tol):  # pragma: no cover - abstract
        raise NotImplementedError

    def jets(self, z, zero_tol=ZERO_TOL):
        """Return ``(f, f', f'')`` as arrays evaluated at the points ``z``."""
        return self._jets(_as_points(z), zero_tol)

    def __call__(self, z, zero_tol=ZERO_TOL):
        v = self.jets(z, zero_tol)[0]
        if np.ndim(z) == 0:
            return complex(v[0])
        return v

    # arithmetic sugar -------------------------------------------------
    def __add__(self, other):
        return Sum((self, as_expr(other)))

    def __radd__(self, other):
        return Sum((as_expr(other), self))

    def __neg__(self):
        return Product((Const(-1.0), self))

    def __sub__(self, other):
        return Sum((self, -as_expr(other)))

    def __rsub__(self, other):
        return Sum((as_expr(other), -self))

    def __mul__(self, other):
        return Product((self, as_expr(other)))

    def __rmul__(self, other):
        return Product((as_expr(other), self))

    def __truediv__(self, other):
        return Quotient(self, as_expr(other))

    def __rtruediv__(self, other):
        return Quotient(as_expr(other), self)

    def __pow__(self, n):
        if int(n) != n:
            raise TypeError("only integer powers are supported")
        return Power(self, int(n))

    def to_dict(self) -> dict:
        raise NotImplementedError


def as_expr(x) -> HoloExpr:
    if isinstance(x, HoloExpr):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Const(complex(x))
    raise TypeError(f"cannot convert {type(x).__name__} to HoloExpr")


@dataclass(frozen=True)
class Const(HoloExpr):
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def _jets(self, z, zero_tol):
        zero = np.zeros_like(z)
        return np.full_like(z, self.c), zero, zero.copy()

    def to_dict(self):
        return {"op": "const", "value": _cx_out(self.c)}


@dataclass(frozen=True)
class Coord(HoloExpr):
    def _jets(self, z, zero_tol):
        return z.copy(), np.ones_like(z), np.zeros_like(z)

    def to_dict(self):
        return {"op": "z"}


@dataclass(frozen=True)
class Sum(HoloExpr):
    terms: tuple

    def __post_init__(self):
        flat = []
        for t in self.terms:
            flat.extend(t.terms if isinstance(t, Sum) else (t,))
        object.__setattr__(self, "terms", tuple(flat))

    def _jets(self, z, zero_tol):
        v = np.zeros_like(z)
        d1 = np.zeros_like(z)
        d2 = np.zeros_like(z)
        for t in self.terms:
            a, b, c = t._jets(z, zero_tol)
            v = v + a
            d1 = d1 + b
            d2 = d2 + c
        return v, d1, d2

    def to_dict(self):
        return {"op": "add", "args": [t.to_dict() for t in self.terms]}


@dataclass(frozen=True)
class Product(HoloExpr):
    factors: tuple

    def __post_init__(self):
        flat = []
        for f in self.factors:
            flat.extend(f.factors if isinstance(f, Product) else (f,))
        object.__setattr__(self, "factors", tuple(flat))

    def _jets(self, z, zero_tol):
        v = np.ones_like(z)
        d1 = np.zeros_like(z)
        d2 = np.zeros_like(z)
        for f in self.factors:
            a, b, c = f._jets(z, zero_tol)
            v, d1, d2 = v * a, d1 * a + v * b, d2 * a + 2.0 * d1 * b + v * c
        return v, d1, d2

    def to_dict(self):
        return {"op": "mul", "args": [f.to_dict() for f in self.factors]}


@dataclass(frozen=True)
class Quotient(HoloExpr):
    num: HoloExpr
    den: HoloExpr

    def _jets(self, z, zero_tol):
        u, u1, u2 = self.num._jets(z, zero_tol)
        w, w1, w2 = self.den._jets(z, zero_tol)
        _check_nonzero(w, w1, self, z, zero_tol, "denominator")
        q = u / w
        q1 = (u1 - q * w1) / w
        q2 = (u2 - 2.0 * q1 * w1 - q * w2) / w
        return q, q1, q2

    def to_dict(self):
        return {"op": "div", "num": self.num.to_dict(), "den": self.den.to_dict()}


@dataclass(frozen=True)
class Power(HoloExpr):
    base: HoloExpr
    n: int

    def _jets(self, z, zero_tol):
        u, u1, u2 = self.base._jets(z, zero_tol)
        n = self.n
        if n == 0:
            return np.ones_like(z), np.zeros_like(z), np.zeros_like(z)
        if n < 0:
            _check_nonzero(u, u1, self, z, zero_tol, "base of negative power")
        p2 = u ** (n - 2) if n >= 2 or n < 0 else np.zeros_like(z)
        p1 = u ** (n - 1)
        v = u**n
        d1 = n * p1 * u1
        d2 = n * (n - 1) * p2 * u1 * u1 + n * p1 * u2
        return v, d1, d2

    def to_dict(self):
        return {"op": "pow", "base": self.base.to_dict(), "n": self.n}


@dataclass(frozen=True)
class Exp(HoloExpr):
    arg: HoloExpr

    def _jets(self, z, zero_tol):
        u, u1, u2 = self.arg._jets(z, zero_tol)
        e = np.exp(u)
        return e, e * u1, e * (u2 + u1 * u1)

    def to_dict(self):
        return {"op": "exp", "arg": self.arg.to_dict()}


@dataclass(frozen=True)
class Log(HoloExpr):
    """Principal logarithm shifted by ``2*pi*i*branch``."""

    arg: HoloExpr
    branch: int = 0

    def _jets(self, z, zero_tol):
        u, u1, u2 = self.arg._jets(z, zero_tol)
        _check_nonzero(u, u1, self, z, zero_tol, "log argument")
        r1 = u1 / u
        return np.log(u) + 1j * TWO_PI * self.branch, r1, u2 / u - r1 * r1

    def to_dict(self):
        return {"op": "log", "arg": self.arg.to_dict(), "branch": self.branch}


@dataclass(frozen=True)
class Affine(HoloExpr):
    """``arg`` precomposed with ``z -> a*z + b``."""

    arg: HoloExpr
    a: complex = 1.0
    b: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))

    def _jets(self, z, zero_tol):
        g, g1, g2 = self.arg._jets(self.a * z + self.b, zero_tol)
        return g, self.a * g1, self.a * self.a * g2

    def to_dict(self):
        return {"op": "affine", "arg": self.arg.to_dict(), "a": _cx_out(self.a), "b": _cx_out(self.b)}


@dataclass(frozen=True)
class Roots(HoloExpr):
    """Monic polynomial ``prod(z - r)``; repeated roots encode multiplicity."""

    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(complex(r) for r in self.roots))

    def _jets(self, z, zero_tol):
        v = np.ones_like(z)
        d1 = np.zeros_like(z)
        d2 = np.zeros_like(z)
        for r in self.roots:
            x = z - r
            v, d1, d2 = v * x, d1 * x + v, d2 * x + 2.0 * d1
        return v, d1, d2

    @property
    def degree(self):
        return len(self.roots)

    def to_dict(self):
        return {"op": "roots", "roots": [_cx_out(r) for r in self.roots]}


@dataclass(frozen=True)
class Mobius(HoloExpr):
    """``(a*u + b) / (c*u + d)`` applied to ``u = arg``."""

    arg: HoloExpr
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a * self.d - self.b * self.c == 0:
            raise DomainError("degenerate Mobius transformation (ad - bc = 0)")

    def _jets(self, z, zero_tol):
        u, u1, u2 = self.arg._jets(z, zero_tol)
        den = self.c * u + self.d
        _check_nonzero(den, self.c * u1, self, z, zero_tol, "denominator")
        det = self.a * self.d - self.b * self.c
        m1 = det / (den * den)
        m2 = -2.0 * self.c * m1 / den
        return (self.a * u + self.b) / den, m1 * u1, m2 * u1 * u1 + m1 * u2

    def inverse(self) -> "Mobius":
        """Inverse transformation applied to the same ``arg``."""
        return Mobius(self.arg, self.d, -self.b, -self.c, self.a)

    def to_dict(self):
        return {
            "op": "mobius",
            "arg": self.arg.to_dict(),
            "coeffs": [_cx_out(x) for x in (self.a, self.b, self.c, self.d)],
        }


@dataclass(frozen=True)
class Compose(HoloExpr):
    """``outer(inner(z))``."""

    outer: HoloExpr
    inner: HoloExpr

    def _jets(self, z, zero_tol):
        i0, i1, i2 = self.inner._jets(z, zero_tol)
        o0, o1, o2 = self.outer._jets(i0, zero_tol)
        return o0, o1 * i1, o2 * i1 * i1 + o1 * i2

    def to_dict(self):
        return {"op": "compose", "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


# -------------------------------------------------------------------------
# public operations


def coord() -> Coord:
    return Coord()


def const(c) -> Const:
    return Const(complex(c))


def exp(arg: HoloExpr | None = None) -> Exp:
    return Exp(Coord() if arg is None else as_expr(arg))


def log(arg: HoloExpr | None = None, branch: int = 0) -> Log:
    return Log(Coord() if arg is None else as_expr(arg), int(branch))


def from_roots(roots: Sequence[complex]) -> HoloExpr:
    """Monic polynomial with exactly the given zeros (empty list gives 1)."""
    roots = tuple(complex(r) for r in roots)
    if not roots:
        return Const(1.0)
    return Roots(roots)


def quotient(f: HoloExpr, p: HoloExpr) -> Quotient:
    """``f / p``, deliberately left unsimplified.

    Shared zeros of ``f`` and ``p`` are removable singularities of the
    quotient, but they are not cancelled symbolically: evaluate away from
    them.
    """
    return Quotient(as_expr(f), as_expr(p))


def mobius(a, b, c, d, arg: HoloExpr | None = None) -> Mobius:
    return Mobius(Coord() if arg is None else arg, a, b, c, d)


def compose(outer: HoloExpr, inner: HoloExpr) -> HoloExpr:
    return Compose(outer, inner)


def eval_jet(f: HoloExpr, z: complex, zero_tol: float = ZERO_TOL) -> Jet2:
    """Value, first and second derivative of ``f`` at the single point ``z``."""
    if not np.isfinite(complex(z)):
        raise DomainError(f"non-finite evaluation point {z!r}")
    v, d1, d2 = f._jets(np.array([complex(z)]), zero_tol)
    return Jet2(complex(v[0]), complex(d1[0]), complex(d2[0]))


def log_derivative(f: HoloExpr, z: complex, zero_tol: float = ZERO_TOL) -> complex:
    """``f'(z) / f(z)``; raises ZeroValueError where ``f`` vanishes."""
    j = eval_jet(f, z, zero_tol)
    if not abs(j.value) > zero_tol * (1.0 + abs(j.d1)):
        raise ZeroValueError(f"f vanishes at z={complex(z)!r}")
    return j.d1 / j.value


# -------------------------------------------------------------------------
# serialization


def _cx_out(c: complex) -> list:
    c = complex(c)
    return [c.real, c.imag]


def parse_complex(x) -> complex:
    """Accept ``[re, im]`` pairs or plain real numbers."""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    raise ParseError(f"expected a complex number as [re, im], got {x!r}")


def _req(d, key):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise ParseError(f"expression node {d!r} is missing field {key!r}") from None


def expr_from_dict(d: dict) -> HoloExpr:
    """Inverse of ``HoloExpr.to_dict``."""
    if not isinstance(d, dict) or "op" not in d:
        raise ParseError(f"expression node must be an object with an 'op' field, got {d!r}")
    op = d["op"]
    if op == "const":
        return Const(parse_complex(_req(d, "value")))
    if op == "z":
        return Coord()
    if op == "add":
        return Sum(tuple(expr_from_dict(a) for a in _req(d, "args")))
    if op == "mul":
        return Product(tuple(expr_from_dict(a) for a in _req(d, "args")))
    if op == "div":
        return Quotient(expr_from_dict(_req(d, "num")), expr_from_dict(_req(d, "den")))
    if op == "pow":
        n = _req(d, "n")
        if int(n) != n:
            raise ParseError(f"pow exponent must be an integer, got {n!r}")
        return Power(expr_from_dict(_req(d, "base")), int(n))
    if op == "exp":
        return Exp(expr_from_dict(d.get("arg", {"op": "z"})))
    if op == "log":
        return Log(expr_from_dict(d.get("arg", {"op": "z"})), int(d.get("branch", 0)))
    if op == "affine":
        return Affine(expr_from_dict(d.get("arg", {"op": "z"})),
                      parse_complex(d.get("a", 1.0)), parse_complex(d.get("b", 0.0)))
    if op == "roots":
        return from_roots([parse_complex(r) for r in _req(d, "roots")])
    if op == "mobius":
        coeffs = [parse_complex(c) for c in _req(d, "coeffs")]
        if len(coeffs) != 4:
            raise ParseError("mobius needs four coefficients [a, b, c, d]")
        try:
            return Mobius(expr_from_dict(d.get("arg", {"op": "z"})), *coeffs)
        except DomainError as exc:
            raise ParseError(str(exc)) from None
    if op == "compose":
        return Compose(expr_from_dict(_req(d, "outer")), expr_from_dict(_req(d, "inner")))
    raise ParseError(f"unknown expression op {op!r}")


__all__ = [
    "ZERO_TOL", "Jet2", "HoloExpr", "Const", "Coord", "Sum", "Product", "Quotient",
    "Power", "Exp", "Log", "Affine", "Roots", "Mobius", "Compose", "as_expr", "coord",
    "const", "exp", "log", "from_roots", "quotient", "mobius", "compose", "eval_jet",
    "log_derivative", "expr_from_dict", "parse_complex",
]
