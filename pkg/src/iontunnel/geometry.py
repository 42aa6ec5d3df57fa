"""Physical constants and double-well trap parameters.

The trap potential is V(x) = b (x^2 - x0^2)^2 = b x^4 - d x^2 + const, whose
minima at +/- x0 are approximately harmonic with frequency omega0. Lengths
are measured in units of the ground-state position uncertainty
delta_x = sqrt(hbar / (2 m omega0)) and the dimensionless well separation is
u = x0^2 / delta_x^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import DomainError

HBAR = 1.054571817e-34  # J s
AMU = 1.66053907e-27  # kg

# Thresholds for the regime flags; chosen to accept u = 10.8 and 17.3 and
# reject u < 5.
DEFAULT_THRESHOLDS = {
    "overlap": 1e-2,
    "lamb_dicke": 0.2,
    "ground_to_excited_rate": 0.1,
    "rate_to_level_energy": 0.1,
}


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float  # kg

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"ion mass must be positive, got {self.mass!r}")

    @classmethod
    def from_amu(cls, name: str, mass_amu: float) -> "IonSpecies":
        return cls(name, mass_amu * AMU)


CA40 = IonSpecies.from_amu("ca40", 40.0)

SPECIES = {"ca40": CA40}


def angular(value: float, convention: str = "plain") -> float:
    """Convert a quoted frequency to s^-1 under the chosen convention.

    ``"plain"`` takes the number as already being in s^-1; ``"angular"``
    multiplies by 2 pi (the quoted number is a cyclic frequency in Hz).
    """
    if convention == "plain":
        return float(value)
    if convention == "angular":
        return 2.0 * math.pi * float(value)
    raise DomainError(f"unknown angular_frequency_convention {convention!r}")


@dataclass(frozen=True)
class TrapGeometry:
    mass: float
    omega0: float
    x0: float
    delta_x: float
    b: float
    d: float
    barrier_h: float
    u: float

    @property
    def separation(self) -> float:
        """Distance 2 x0 between the two minima (m)."""
        return 2.0 * self.x0

    @property
    def level_energy(self) -> float:
        """E0 of the first excited local level, (3/2) hbar omega0 (J)."""
        return 1.5 * HBAR * self.omega0

    def potential(self, x):
        return self.b * (x * x - self.x0 * self.x0) ** 2

    def harmonic_potential(self, x, well: int):
        """Parabolic approximation around the minimum of ``well`` (1 at -x0, 2 at +x0)."""
        center = (-1) ** well * self.x0
        return 0.5 * self.mass * self.omega0**2 * (x - center) ** 2

    @classmethod
    def from_coefficients(cls, mass: float, b: float, d: float) -> "TrapGeometry":
        """Alternate constructor from the quartic coefficients of V(x)."""
        if not (mass > 0 and b > 0 and d > 0):
            raise DomainError("mass, b and d must all be positive")
        omega0 = math.sqrt(4.0 * d / mass)
        delta_x = math.sqrt(HBAR / (2.0 * mass * omega0))
        x0 = math.sqrt(d / (2.0 * b))
        return cls(
            mass=mass,
            omega0=omega0,
            x0=x0,
            delta_x=delta_x,
            b=b,
            d=d,
            barrier_h=d * d / (4.0 * b),
            u=(x0 / delta_x) ** 2,
        )


def derive_geometry(species: IonSpecies, omega0: float, u: float) -> TrapGeometry:
    """Build the trap from the ion mass, well frequency and separation ratio u."""
    if not (omega0 > 0 and math.isfinite(omega0)):
        raise DomainError(f"omega0 must be positive, got {omega0!r}")
    if not (u > 0 and math.isfinite(u)):
        raise DomainError(f"u = x0^2/delta_x^2 must be positive, got {u!r}")
    m = species.mass
    delta_x = math.sqrt(HBAR / (2.0 * m * omega0))
    x0 = math.sqrt(u) * delta_x
    d = m * omega0**2 / 4.0
    b = d / (2.0 * x0 * x0)
    return TrapGeometry(
        mass=m,
        omega0=omega0,
        x0=x0,
        delta_x=delta_x,
        b=b,
        d=d,
        barrier_h=d * d / (4.0 * b),
        u=u,
    )


def geometry_from_x0(species: IonSpecies, omega0: float, x0: float) -> TrapGeometry:
    if not x0 > 0:
        raise DomainError(f"x0 must be positive, got {x0!r}")
    delta_x2 = HBAR / (2.0 * species.mass * omega0) if omega0 > 0 else -1.0
    if delta_x2 <= 0:
        raise DomainError(f"omega0 must be positive, got {omega0!r}")
    return derive_geometry(species, omega0, x0 * x0 / delta_x2)


def closed_form_rates(geometry: TrapGeometry):
    """Leading-order tunneling rates of the ground and first-excited levels.

    Returns ``(Omega1, Omega2, R1, R2)`` with the frequencies in s^-1 and the
    splittings R = hbar Omega / 2 in J.
    """
    u = geometry.u
    omega1 = 0.375 * geometry.omega0 * u * math.exp(-0.5 * u)
    omega2 = u * omega1
    return omega1, omega2, 0.5 * HBAR * omega1, 0.5 * HBAR * omega2


def chi_from_geometry(geometry: TrapGeometry, eta: float, g: float) -> float:
    """R2 / (hbar eta g), written directly in terms of u."""
    u = geometry.u
    return 3.0 * geometry.omega0 * u * u / (16.0 * eta * g) * math.exp(-0.5 * u)


def chi_carrier_from_geometry(geometry: TrapGeometry, g: float) -> float:
    """R2 / (hbar g), the tunneling-to-drive ratio of the carrier regime."""
    return chi_from_geometry(geometry, 1.0, g)


def u_for_chi(chi: float, omega0: float, eta: float, g: float) -> float:
    """Invert chi(u) on the physical branch u > 4 where chi decreases with u.

    Returns ``math.inf`` for chi = 0.
    """
    if chi < 0:
        raise DomainError("chi must be non-negative")
    if chi == 0:
        return math.inf
    scale = 3.0 * omega0 / (16.0 * eta * g)

    def f(u):
        return math.log(scale) + 2.0 * math.log(u) - 0.5 * u - math.log(chi)

    if f(4.0) < 0:
        raise DomainError(f"chi = {chi} exceeds the maximum {scale * 16 * math.exp(-2):.3g} reachable")
    hi = 8.0
    while f(hi) > 0:
        hi *= 2.0
    return brentq(f, 4.0, hi, xtol=1e-14, rtol=1e-15)


@dataclass(frozen=True)
class Flag:
    constraint: str
    value: float
    threshold: float
    passed: bool
    inclusive: bool = False

    def recompute(self) -> bool:
        if self.inclusive:
            return self.value <= self.threshold
        return self.value < self.threshold


def _flag(name, value, threshold, inclusive=False):
    f = Flag(name, value, threshold, False, inclusive)
    return Flag(name, value, threshold, f.recompute(), inclusive)


@dataclass(frozen=True)
class RegimeReport:
    epsilon: float
    eta: float
    ratio_R1_R2: float
    ratio_R2_E0: float
    chi: float
    xi: float
    chi_carrier: float
    flags: tuple = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(f.passed for f in self.flags)


def regime_report(geometry: TrapGeometry, eta: float, g: float, thresholds=None) -> RegimeReport:
    """Check the approximations behind the restricted Hamiltonians."""
    th = dict(DEFAULT_THRESHOLDS)
    if thresholds:
        th.update(thresholds)
    u = geometry.u
    _, _, r1, r2 = closed_form_rates(geometry)
    epsilon = math.exp(-0.5 * u)
    chi = r2 / (HBAR * eta * g)
    ratio_r1_r2 = abs(r1 / r2)
    ratio_r2_e0 = r2 / geometry.level_energy
    flags = (
        _flag("overlap", epsilon, th["overlap"]),
        _flag("lamb_dicke", eta, th["lamb_dicke"], inclusive=True),
        _flag("ground_to_excited_rate", ratio_r1_r2, th["ground_to_excited_rate"]),
        _flag("rate_to_level_energy", ratio_r2_e0, th["rate_to_level_energy"]),
    )
    return RegimeReport(
        epsilon=epsilon,
        eta=eta,
        ratio_R1_R2=ratio_r1_r2,
        ratio_R2_E0=ratio_r2_e0,
        chi=chi,
        xi=math.sqrt(1.0 + chi * chi),
        chi_carrier=r2 / (HBAR * g),
        flags=flags,
    )
