"""Globally adaptive Gauss-Legendre quadrature on a finite interval."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalError


@dataclass(frozen=True)
class QuadratureSpec:
    lower: float
    upper: float
    rel_tolerance: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DomainError("quadrature interval needs lower < upper")
        if not 0 < self.rel_tolerance <= 1e-4:
            raise DomainError("rel_tolerance must lie in (0, 1e-4]")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


@lru_cache(maxsize=None)
def _nodes(n):
    return np.polynomial.legendre.leggauss(n)


def _panel(f, a, b, n):
    x, w = _nodes(n)
    x2, w2 = _nodes(2 * n)
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    lo = half * np.dot(w, f(mid + half * x))
    fx = f(mid + half * x2)
    hi = half * np.dot(w2, fx)
    l1 = half * np.dot(w2, np.abs(fx))
    return hi, abs(hi - lo), l1


def integrate(f, spec: QuadratureSpec, order: int = 10):
    """Integrate a vectorised real function over ``[spec.lower, spec.upper]``.

    Each panel is estimated with an ``order``-point and a ``2*order``-point
    rule; the panel with the largest error estimate is bisected until the
    summed error is below ``rel_tolerance`` relative to the integral, or to
    the integral of ``|f|`` when the result cancels to (near) zero.

    Returns ``(value, error_estimate)``.
    """
    value, err, l1 = _panel(f, spec.lower, spec.upper, order)
    heap = [(-err, spec.lower, spec.upper, value, l1)]
    total, total_err, total_l1 = value, err, l1
    splits = 0
    while not _converged(total, total_err, total_l1, spec.rel_tolerance):
        if splits >= spec.max_subdivisions:
            achieved = total_err / max(abs(total), 1e-300)
            raise NumericalError(
                f"quadrature did not converge after {splits} subdivisions "
                f"(achieved relative error {achieved:.3g})",
                achieved=achieved,
            )
        neg_err, a, b, v, pl1 = heapq.heappop(heap)
        m = 0.5 * (a + b)
        total -= v
        total_err += neg_err
        total_l1 -= pl1
        for lo, hi in ((a, m), (m, b)):
            v2, e2, l2 = _panel(f, lo, hi, order)
            heapq.heappush(heap, (-e2, lo, hi, v2, l2))
            total += v2
            total_err += e2
            total_l1 += l2
        splits += 1
    return total, total_err


def _converged(total, err, l1, rtol):
    # round-off floor on the summed error estimate
    return err <= rtol * abs(total) or err <= 1e-3 * rtol * l1
