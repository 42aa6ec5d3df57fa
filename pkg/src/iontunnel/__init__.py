"""Single-ion tunneling in a double-well trap.

Trap geometry, local Hermite-Gaussian modes, restricted Hamiltonians,
Schrodinger propagation and closed-form fluorescence curves.
"""

__version__ = "0.1.0"

from .geometry import (
    CA40,
    HBAR,
    AMU,
    IonSpecies,
    RegimeReport,
    TrapGeometry,
    closed_form_rates,
    derive_geometry,
    regime_report,
)
from .hilbert import BasisState, OperatorMatrix, StateVector, build_basis
from .hamiltonians import RegimeParams
from .dynamics import TimeGrid, Trajectory, propagate_expm, propagate_ode

__all__ = [
    "AMU",
    "CA40",
    "HBAR",
    "BasisState",
    "IonSpecies",
    "OperatorMatrix",
    "RegimeParams",
    "RegimeReport",
    "StateVector",
    "TimeGrid",
    "Trajectory",
    "TrapGeometry",
    "build_basis",
    "closed_form_rates",
    "derive_geometry",
    "propagate_expm",
    "propagate_ode",
    "regime_report",
]
