"""Closed-form conformal maps onto the unit disk for catalog domains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContainmentError, UnsupportedShapeError
from ..holo import Coord, HoloExpr, Mobius
from .regions import Disk, HalfPlane, Region


@dataclass(frozen=True)
class ConformalMapEntry:
    """Map of ``source`` onto the unit disk sending ``basepoint`` to 0."""

    source: Region
    basepoint: complex
    forward: HoloExpr
    inverse: HoloExpr

    def __call__(self, z):
        return self.forward(z)

    def to_dict(self):
        return {"region": self.source.to_dict(), "basepoint": [self.basepoint.real, self.basepoint.imag]}


def conformal_to_disk(U: Region, b: complex) -> ConformalMapEntry:
    """Mobius map of a disk or half-plane onto the unit disk with ``b -> 0``.

    For ``U = disk(c, R)`` and ``beta = b - c`` the map is
    ``R (z - c - beta) / (R**2 - conj(beta) (z - c))``.  For ``{Re w < B}``
    it is ``(b - w) / (B (2 - conj(b)/B) - w)``.
    """
    b = complex(b)
    if not bool(U.contains(b)):
        raise ContainmentError(f"basepoint {b} is not inside {U!r}")
    if isinstance(U, Disk):
        c, R = U.center, U.radius
        beta = b - c
        fwd = Mobius(Coord(), R, -R * (c + beta), -np.conj(beta), R * R + np.conj(beta) * c)
    elif isinstance(U, HalfPlane):
        B = U.bound
        if not B > 0:
            # translate so the boundary sits at a positive abscissa
            shift = 1.0 - B
            m = conformal_to_disk(HalfPlane(1.0), b + shift)
            fwd = Mobius(Coord(), m.forward.a, m.forward.b + m.forward.a * shift,
                         m.forward.c, m.forward.d + m.forward.c * shift)
            return ConformalMapEntry(U, b, fwd, fwd.inverse())
        fwd = Mobius(Coord(), -1.0, b, -1.0, B * (2.0 - np.conj(b) / B))
    else:
        raise UnsupportedShapeError(
            f"no closed-form disk map for {type(U).__name__}; catalog has disk and half-plane")
    return ConformalMapEntry(U, b, fwd, fwd.inverse())
