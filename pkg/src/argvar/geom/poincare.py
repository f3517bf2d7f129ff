"""Exact Poincare distances (curvature -1) on the unit disk and on a half-plane."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError


def poincare_distance_disk(a, b):
    """Hyperbolic distance in the unit disk, ``2 artanh |(a - b) / (1 - conj(a) b)|``.

    Vectorized over ``a`` and ``b``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if np.any(np.abs(a) >= 1.0) or np.any(np.abs(b) >= 1.0):
        raise DomainError("points must lie strictly inside the unit disk")
    t = np.abs((a - b) / (1.0 - np.conj(a) * b))
    d = 2.0 * np.arctanh(np.minimum(t, 1.0))
    return float(d) if d.ndim == 0 else d


def poincare_distance_halfplane(w, B: float = 1.0, w0=0.0):
    """Hyperbolic distance between ``w0`` and ``w`` in ``{Re w < B}``.

    The density is ``1 / (B - Re w)``.  Rescaling by ``B`` reduces to the
    half-plane ``Re u < 1``, where ``v = 1 - u`` lies in the right half-plane
    and ``d = 2 artanh |(v1 - v2) / (v1 + conj(v2))|``.
    """
    if not B > 0:
        raise DomainError(f"half-plane bound must be positive, got {B}")
    w = np.asarray(w, dtype=complex) / B
    w0 = np.asarray(w0, dtype=complex) / B
    if np.any(w.real >= 1.0) or np.any(w0.real >= 1.0):
        raise DomainError("points must satisfy Re w < B")
    v1, v2 = 1.0 - w0, 1.0 - w
    t = np.abs((v1 - v2) / (v1 + np.conj(v2)))
    d = 2.0 * np.arctanh(np.minimum(t, 1.0))
    return float(d) if d.ndim == 0 else d
