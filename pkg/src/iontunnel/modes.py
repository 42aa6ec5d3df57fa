"""Local Hermite-Gaussian modes of the two wells and their integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import TrapGeometry
from .quadrature import QuadratureSpec, integrate

MAX_LEVEL = 8


@dataclass(frozen=True)
class LocalMode:
    """Level ``level`` (1 = ground) of the harmonic well ``well``.

    Well 1 is centred at -x0 and well 2 at +x0.
    """

    well: int
    level: int
    center: float
    width: float

    def __post_init__(self):
        if self.well not in (1, 2):
            raise DomainError(f"well must be 1 or 2, got {self.well!r}")
        if not 1 <= self.level <= MAX_LEVEL:
            raise DomainError(f"level must be in 1..{MAX_LEVEL}, got {self.level!r}")
        if not self.width > 0:
            raise DomainError("mode width must be positive")

    @classmethod
    def of(cls, geometry: TrapGeometry, well: int, level: int) -> "LocalMode":
        return cls(well, level, (-1) ** well * geometry.x0, geometry.delta_x)


def _hermite_functions(xi, kmax):
    """Normalised Hermite functions h_0..h_kmax at ``xi`` (unit oscillator length).

    Three-term recurrence on the normalised functions, so no factorials appear.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((kmax + 1,) + xi.shape)
    out[0] = math.pi**-0.25 * np.exp(-0.5 * xi * xi)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for k in range(1, kmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * xi * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def mode_value(mode: LocalMode, x):
    """Amplitude of the normalised local mode at ``x`` (units m^-1/2).

    The oscillator length is sqrt(2) * width, so the ground state has position
    variance width^2.
    """
    length = math.sqrt(2.0) * mode.width
    xi = (np.asarray(x, dtype=float) - mode.center) / length
    return _hermite_functions(xi, mode.level - 1)[-1] / math.sqrt(length)


def default_quadrature(geometry: TrapGeometry, rel_tolerance=1e-10, max_subdivisions=200, margin=12.0):
    reach = geometry.x0 + margin * geometry.delta_x
    return QuadratureSpec(-reach, reach, rel_tolerance, max_subdivisions)


def overlap(a: LocalMode, b: LocalMode, q: QuadratureSpec) -> float:
    """Overlap integral of two local modes."""
    if not math.isclose(a.width, b.width, rel_tol=1e-12):
        raise DomainError("overlap requires modes of equal width")
    value, _ = integrate(lambda x: mode_value(a, x) * mode_value(b, x), q)
    return value


def overlap_matrix(geometry: TrapGeometry, q: QuadratureSpec, levels: int = 2):
    modes = [LocalMode.of(geometry, w, n) for w in (1, 2) for n in range(1, levels + 1)]
    k = len(modes)
    s = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            s[i, j] = s[j, i] = overlap(modes[i], modes[j], q)
    return s


def coupling_element(n: int, geometry: TrapGeometry, q: QuadratureSpec, symmetric: bool = False) -> float:
    """Signed tunneling matrix element of level ``n`` between the wells (J).

    The integrand is phi_1(x) [V(x) - V1(x)] phi_2(x), with V1 the parabolic
    approximation around well 1. ``symmetric=True`` subtracts the mean of
    the two parabolic approximations instead.
    """
    if n not in (1, 2):
        raise DomainError(f"coupling level must be 1 or 2, got {n!r}")
    m1 = LocalMode.of(geometry, 1, n)
    m2 = LocalMode.of(geometry, 2, n)

    def integrand(x):
        if symmetric:
            ref = 0.5 * (geometry.harmonic_potential(x, 1) + geometry.harmonic_potential(x, 2))
        else:
            ref = geometry.harmonic_potential(x, 1)
        return mode_value(m1, x) * (geometry.potential(x) - ref) * mode_value(m2, x)

    value, _ = integrate(integrand, q)
    return value
