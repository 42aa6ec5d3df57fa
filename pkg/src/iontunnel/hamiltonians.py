"""Interaction-picture Hamiltonians of the driven double-well ion.

All matrices are H / hbar in s^-1 (or in whatever frequency unit the
caller uses for R1, R2 and g consistently).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .hilbert import (
    Basis,
    OperatorMatrix,
    build_basis,
    mode_operator,
    sigma_plus,
    transfer,
)

REGIMES = ("red_sideband_well1", "carrier_well1", "red_sideband_both", "extended_LD")


@dataclass(frozen=True)
class RegimeParams:
    R1: float
    R2: float
    g: float
    eta: float
    phi_L: float = -math.pi / 2
    regime: str = "red_sideband_well1"

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime {self.regime!r}")
        if not self.g >= 0:
            raise DomainError("g must be non-negative")
        if not 0 <= self.eta < 1:
            raise DomainError("eta must lie in [0, 1)")
        if not (math.isfinite(self.R1) and math.isfinite(self.R2)):
            raise DomainError("tunneling rates must be finite")

    @property
    def w(self) -> float:
        """Effective sideband Rabi frequency eta * g."""
        return self.eta * self.g

    @property
    def chi(self) -> float:
        """R2 / (eta g); R2 / g in the carrier regime."""
        scale = self.g if self.regime == "carrier_well1" else self.w
        return self.R2 / scale


def _tunneling(basis: Basis, rates: Sequence[float]):
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    for n, r in enumerate(rates, start=1):
        if r:
            t = transfer(basis, (2, n), (1, n)).matrix
            m += r * (t + t.T)
    return m


def build_motional(basis: Basis, R1: float, R2: float, E0_offsets: Optional[Sequence[float]] = None,
                   rates: Optional[Sequence[float]] = None) -> OperatorMatrix:
    """Local-mode motional Hamiltonian: level offsets plus well-to-well tunneling.

    ``rates`` overrides (R1, R2) with one rate per level.
    """
    rates = list(rates) if rates is not None else [R1, R2][: basis.levels]
    m = _tunneling(basis, rates)
    if E0_offsets is not None:
        for n, e in enumerate(E0_offsets, start=1):
            for w in (1, 2):
                m += e * transfer(basis, (w, n), (w, n)).matrix
    return OperatorMatrix(basis, m, hermitian=True)


def _sideband(basis: Basis, wells, eta_g, phi, levels):
    """i eta g (sigma_+ sum_n sqrt(n) c^(n)+ c^(n+1) e^{i phi} - h.c.) on ``wells``."""
    sp = sigma_plus(basis).matrix
    lower = np.zeros((len(basis), len(basis)), dtype=complex)
    for w in wells:
        for n in range(1, levels):
            lower += math.sqrt(n) * mode_operator(basis, w, n + 1, n).matrix
    a = 1j * eta_g * np.exp(1j * phi) * (sp @ lower)
    return a + a.conj().T


def _require(p: RegimeParams, regime: str):
    if p.regime != regime:
        raise DomainError(f"parameters are for {p.regime}, not {regime}")


def build_red_sideband_well1(p: RegimeParams) -> OperatorMatrix:
    """Red-sideband drive on well 1 with tunneling in both local levels."""
    _require(p, "red_sideband_well1")
    basis = build_basis(2, electronic=True)
    m = _tunneling(basis, [p.R1, p.R2]) + _sideband(basis, (1,), p.w, p.phi_L, 2)
    return OperatorMatrix(basis, m, hermitian=True)


def build_carrier_well1(p: RegimeParams) -> OperatorMatrix:
    """Carrier drive; the spin flips only while the ion sits in well 1."""
    _require(p, "carrier_well1")
    basis = build_basis(2, electronic=True)
    a = p.g * np.exp(1j * p.phi_L) * sigma_plus(basis, "well1_only").matrix
    m = _tunneling(basis, [p.R1, p.R2]) + a + a.conj().T
    return OperatorMatrix(basis, m, hermitian=True)


def build_red_sideband_both(p: RegimeParams) -> OperatorMatrix:
    """Red-sideband drive reaching both wells; ground-level tunneling dropped."""
    _require(p, "red_sideband_both")
    basis = build_basis(2, electronic=True)
    m = _tunneling(basis, [0.0, p.R2]) + _sideband(basis, (1, 2), p.w, p.phi_L, 2)
    return OperatorMatrix(basis, m, hermitian=True)


def build_extended_LD(p: RegimeParams, levels: int = 2, rates: Optional[Sequence[float]] = None,
                      ld_scalar_factor: bool = False) -> OperatorMatrix:
    """First-order Lamb-Dicke sideband Hamiltonian on ``levels`` levels per well.

    ``rates`` gives one tunneling rate per level; by default (R1, R2) and zero
    above, since only the two lowest levels have closed-form rates.
    ``ld_scalar_factor`` multiplies the drive by exp(-eta^2), the value of the
    Debye-Waller operator in the single-particle sector.
    """
    _require(p, "extended_LD")
    if levels < 2:
        raise DomainError("extended Lamb-Dicke Hamiltonian needs levels >= 2")
    basis = build_basis(levels, electronic=True)
    if rates is None:
        rates = [p.R1, p.R2] + [0.0] * (levels - 2)
    elif len(rates) != levels:
        raise DomainError(f"need {levels} tunneling rates, got {len(rates)}")
    eta_g = p.w * (math.exp(-p.eta**2) if ld_scalar_factor else 1.0)
    m = _tunneling(basis, rates) + _sideband(basis, (1,), eta_g, p.phi_L, levels)
    return OperatorMatrix(basis, m, hermitian=True)


def build_hamiltonian(p: RegimeParams, levels: int = 2, **kwargs) -> OperatorMatrix:
    if p.regime == "red_sideband_well1":
        return build_red_sideband_well1(p)
    if p.regime == "carrier_well1":
        return build_carrier_well1(p)
    if p.regime == "red_sideband_both":
        return build_red_sideband_both(p)
    return build_extended_LD(p, levels, **kwargs)
