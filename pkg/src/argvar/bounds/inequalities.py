"""Closed-form right-hand sides of the zero-count and variation bounds.

Each bound of the form ``c * exp(x)`` is also available as its natural
logarithm (``log_*`` functions) so that astronomically large values can be
compared without overflow; the plain functions return ``inf`` past the
double range.
"""

from __future__ import annotations

import math

from ..errors import HypothesisError


def _exp_times(c: float, x: float) -> float:
    if c == 0.0:
        return 0.0
    lv = math.log(c) + x
    return math.exp(lv) if lv < 709.0 else math.inf


def _log_exp_times(c: float, x: float) -> float:
    return -math.inf if c == 0.0 else math.log(c) + x


def _check_positive(**kw):
    for k, v in kw.items():
        if not v > 0:
            raise ValueError(f"{k} must be positive, got {v}")


def _check_nonneg(**kw):
    for k, v in kw.items():
        if not v >= 0:
            raise ValueError(f"{k} must be non-negative, got {v}")


def growth_zeros_bound(B: float, D: float, eps: float) -> float:
    """Zero-count bound ``B * exp(2 D / eps)``."""
    _check_positive(D=D, eps=eps)
    _check_nonneg(B=B)
    return _exp_times(B, 2.0 * D / eps)


def log_growth_zeros_bound(B, D, eps):
    _check_positive(D=D, eps=eps)
    return _log_exp_times(B, 2.0 * D / eps)


def poincare_zeros_bound(B: float, rho: float) -> float:
    """Zero-count bound in terms of the Poincare diameter: ``B * exp(rho)``."""
    _check_nonneg(B=B, rho=rho)
    return _exp_times(B, rho)


def lemma1_bound(B1: float, L: float, D: float, eps: float) -> float:
    """Variation bound for a nonvanishing function: ``B1 * (L / eps) * exp(2 D / eps)``."""
    _check_positive(eps=eps)
    _check_nonneg(B1=B1, L=L, D=D)
    return _exp_times(B1 * L / eps, 2.0 * D / eps)


def log_lemma1_bound(B1, L, D, eps):
    _check_positive(eps=eps)
    return _log_exp_times(B1 * L / eps, 2.0 * D / eps)


def lemma2_bound(B: float, d: int, D: float, eps: float) -> float:
    """Bernstein index of the deflated function: ``B + d * log(D / eps)``."""
    _check_positive(D=D, eps=eps)
    if not D / eps > 1.0:
        raise HypothesisError(f"need D/eps > 1, got {D / eps:.6g}", "D/eps>1")
    if d < 0 or int(d) != d:
        raise ValueError(f"degree must be a non-negative integer, got {d}")
    return B + d * math.log(D / eps)


def polynomial_variation_bound(kappa: float, d: int) -> float:
    """Variation of a degree ``d`` polynomial along a curve: ``(kappa + 2 pi) * d``."""
    _check_nonneg(kappa=kappa, d=d)
    return (kappa + 2.0 * math.pi) * d


def lemma3_bound(kappa: float, L: float, eps: float) -> float:
    """Total curvature of a conformal image: ``kappa + 2 L / eps``."""
    _check_positive(eps=eps)
    _check_nonneg(kappa=kappa, L=L)
    return kappa + 2.0 * L / eps


def _theorem_factor(L, kappa, eps, extra):
    return L / eps + kappa + extra


def theorem_bound(B: float, L: float, kappa: float, D: float, eps: float,
                  extra: float = 1.0) -> float:
    """Variation bound ``B * (L/eps + kappa + 1) * exp(5 D / eps)``.

    ``extra`` replaces the additive constant 1; passing ``2*pi`` gives the
    unabsorbed form of the same estimate.

    Raises
    ------
    HypothesisError
        If ``D / eps <= 3``.
    """
    _check_positive(D=D, eps=eps)
    _check_nonneg(B=B, L=L, kappa=kappa)
    if not D / eps > 3.0:
        raise HypothesisError(f"need D/eps > 3, got {D / eps:.6g}", "D/eps>3")
    return _exp_times(B * _theorem_factor(L, kappa, eps, extra), 5.0 * D / eps)


def log_theorem_bound(B, L, kappa, D, eps, extra=1.0):
    _check_positive(D=D, eps=eps)
    if not D / eps > 3.0:
        raise HypothesisError(f"need D/eps > 3, got {D / eps:.6g}", "D/eps>3")
    return _log_exp_times(B * _theorem_factor(L, kappa, eps, extra), 5.0 * D / eps)
