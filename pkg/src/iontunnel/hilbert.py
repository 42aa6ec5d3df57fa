"""Single-particle basis (well x level x electronic state) and operators.

The ion occupies exactly one local mode, so a basis state is a pair
(well, level) optionally tensored with an electronic state. Ordering is
well-major, level-minor, electronic last with ``up`` before ``down``:

    (1,1,up) (1,1,down) (1,2,up) (1,2,down) ... (2,N,up) (2,N,down)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .errors import DomainError

MAX_LEVELS = 8
HERMITIAN_TOL = 1e-12
UP, DOWN = "up", "down"


@dataclass(frozen=True, order=True)
class BasisState:
    well: int
    level: int
    spin: Optional[str] = None

    @property
    def label(self) -> str:
        s = f"w{self.well}n{self.level}"
        return s if self.spin is None else f"{s}{'u' if self.spin == UP else 'd'}"


@dataclass(frozen=True)
class Basis:
    levels: int
    electronic: bool
    states: tuple = field(init=False, compare=False)
    _index: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        spins = (UP, DOWN) if self.electronic else (None,)
        states = tuple(
            BasisState(w, n, s) for w in (1, 2) for n in range(1, self.levels + 1) for s in spins
        )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(states)})

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def index(self, state: BasisState) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise DomainError(f"{state} is not in this basis") from None

    def labels(self):
        return [s.label for s in self.states]


def build_basis(levels_per_well: int = 2, electronic: bool = True) -> Basis:
    if not 1 <= levels_per_well <= MAX_LEVELS:
        raise DomainError(f"levels_per_well must be in 1..{MAX_LEVELS}, got {levels_per_well}")
    return Basis(levels_per_well, electronic)


def _scaled_asymmetry(m):
    scale = max(1.0, float(np.max(np.abs(m))))
    return float(np.max(np.abs(m - m.conj().T))) / scale


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    basis: Basis
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        n = len(self.basis)
        if self.matrix.shape != (n, n):
            raise DomainError(f"matrix shape {self.matrix.shape} does not match basis size {n}")
        self.matrix.setflags(write=False)
        if self.hermitian and _scaled_asymmetry(self.matrix) >= HERMITIAN_TOL:
            raise DomainError("matrix tagged hermitian is not")

    def is_hermitian(self) -> bool:
        return _scaled_asymmetry(self.matrix) < HERMITIAN_TOL

    @property
    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.matrix.conj().T.copy(), self.hermitian)

    def __add__(self, other):
        _same_basis(self.basis, other.basis)
        return OperatorMatrix(self.basis, self.matrix + other.matrix, self.hermitian and other.hermitian)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            _same_basis(self.basis, other.basis)
            return StateVector(self.basis, self.matrix @ other.amplitudes)
        _same_basis(self.basis, other.basis)
        return OperatorMatrix(self.basis, self.matrix @ other.matrix)

    def scaled(self, factor):
        herm = self.hermitian and np.isreal(factor)
        return OperatorMatrix(self.basis, self.matrix * factor, bool(herm))


@dataclass(frozen=True, eq=False)
class StateVector:
    basis: Basis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (len(self.basis),):
            raise DomainError("amplitude vector does not match basis size")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis_state(cls, basis: Basis, state: BasisState) -> "StateVector":
        amps = np.zeros(len(basis), dtype=complex)
        amps[basis.index(state)] = 1.0
        return cls(basis, amps)

    @classmethod
    def from_components(cls, basis: Basis, components: dict) -> "StateVector":
        amps = np.zeros(len(basis), dtype=complex)
        for state, amp in components.items():
            amps[basis.index(state)] = amp
        return cls(basis, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, state: BasisState) -> complex:
        return complex(self.amplitudes[self.basis.index(state)])

    def is_normalized(self, tol=1e-9) -> bool:
        return abs(self.norm**2 - 1.0) <= tol


def _same_basis(a: Basis, b: Basis):
    if a != b:
        raise DomainError("operands live in different bases")


def transfer(basis: Basis, src: tuple, dst: tuple) -> OperatorMatrix:
    """|dst><src| on the motional factor, identity on the electronic one.

    ``src`` and ``dst`` are (well, level) pairs.
    """
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    spins = (UP, DOWN) if basis.electronic else (None,)
    for s in spins:
        i = basis.index(BasisState(*dst, s))
        j = basis.index(BasisState(*src, s))
        m[i, j] = 1.0
    return OperatorMatrix(basis, m)


def mode_operator(basis: Basis, well: int, from_level: int, to_level: int) -> OperatorMatrix:
    """c_well^(to)+ c_well^(from): move the ion between levels of one well."""
    if well not in (1, 2):
        raise DomainError(f"well must be 1 or 2, got {well!r}")
    for n in (from_level, to_level):
        if not 1 <= n <= basis.levels:
            raise DomainError(f"level {n} outside 1..{basis.levels}")
    return transfer(basis, (well, from_level), (well, to_level))


def _wells(scope):
    if scope in ("well1_only", 1):
        return (1,)
    if scope in ("both_wells", None):
        return (1, 2)
    raise DomainError(f"unknown well scope {scope!r}")


def _spin_operator(basis: Basis, row_spin, col_spin, wells) -> OperatorMatrix:
    if not basis.electronic:
        raise DomainError("basis has no electronic factor")
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    for w in wells:
        for n in range(1, basis.levels + 1):
            m[basis.index(BasisState(w, n, row_spin)), basis.index(BasisState(w, n, col_spin))] = 1.0
    return OperatorMatrix(basis, m)


def sigma_plus(basis: Basis, scope="both_wells") -> OperatorMatrix:
    """|up><down| restricted to motional states of the wells in ``scope``."""
    return _spin_operator(basis, UP, DOWN, _wells(scope))


def sigma_minus(basis: Basis, scope="both_wells") -> OperatorMatrix:
    return _spin_operator(basis, DOWN, UP, _wells(scope))


def sigma_z(basis: Basis) -> OperatorMatrix:
    up = _spin_operator(basis, UP, UP, (1, 2)).matrix
    down = _spin_operator(basis, DOWN, DOWN, (1, 2)).matrix
    return OperatorMatrix(basis, up - down, hermitian=True)


def down_projector(basis: Basis) -> OperatorMatrix:
    return OperatorMatrix(basis, _spin_operator(basis, DOWN, DOWN, (1, 2)).matrix, hermitian=True)


def position_operator(basis: Basis, well_scope="well1_only", delta_x: float = 1.0) -> OperatorMatrix:
    """delta_x * sum_n sqrt(n) (c^(n)+ c^(n+1) + h.c.) over the scoped wells.

    Levels are 1-based here, so the ground/first-excited element is delta_x.
    """
    if basis.levels < 2:
        raise DomainError("position operator needs at least two levels per well")
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    for w in _wells(well_scope):
        for n in range(1, basis.levels):
            m += np.sqrt(n) * transfer(basis, (w, n + 1), (w, n)).matrix
    m = delta_x * (m + m.conj().T)
    return OperatorMatrix(basis, m, hermitian=True)


def displacement_operator(basis: Basis, eta: float, well_scope="well1_only") -> OperatorMatrix:
    """exp(i eta X) with X the position operator in units of delta_x.

    Unitary exactly in the truncated space; it differs from the infinite
    dimensional operator only through the truncation of X.
    """
    x = position_operator(basis, well_scope).matrix
    return OperatorMatrix(basis, expm(1j * eta * x))


def well_swap(basis: Basis) -> OperatorMatrix:
    """Permutation exchanging the two wells, identity on level and spin."""
    m = np.zeros((len(basis), len(basis)), dtype=complex)
    for s in basis:
        m[basis.index(BasisState(3 - s.well, s.level, s.spin)), basis.index(s)] = 1.0
    return OperatorMatrix(basis, m, hermitian=True)


def excitation_number(basis: Basis) -> OperatorMatrix:
    """Motional quanta (level - 1) plus one for the electronic up state."""
    diag = [s.level - 1 + (1 if s.spin == UP else 0) for s in basis]
    return OperatorMatrix(basis, np.diag(np.asarray(diag, dtype=complex)), hermitian=True)


def motional_level(basis: Basis) -> OperatorMatrix:
    diag = [s.level - 1 for s in basis]
    return OperatorMatrix(basis, np.diag(np.asarray(diag, dtype=complex)), hermitian=True)
