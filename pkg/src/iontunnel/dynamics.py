"""Schrodinger propagation and closed-form solutions.

Times in a :class:`TimeGrid` are scaled: tau = rate * t, where ``rate`` is
the effective sideband frequency w = eta g or the carrier frequency g.
Hamiltonians are H / hbar in the same frequency unit as ``rate``.

The eigendecomposition propagator :func:`propagate_expm` is the reference
every other route is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, NumericalError
from .hilbert import DOWN, UP, Basis, BasisState, OperatorMatrix, StateVector, build_basis

# (C11, C21, C12, C22): ground level of well 1 / well 2 with the spin up,
# first-excited level of well 1 / well 2 with the spin down.
COEFFICIENT_STATES = (
    BasisState(1, 1, UP),
    BasisState(2, 1, UP),
    BasisState(1, 2, DOWN),
    BasisState(2, 2, DOWN),
)
COEFFICIENT_NAMES = ("C11", "C21", "C12", "C22")

CHI_LIMIT = 1e-8
# local RK step tolerance relative to the requested global tolerance
STEP_TOL_FACTOR = 1e-2


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    num_points: int
    scaling: str = "w"
    rate: float = 1.0

    def __post_init__(self):
        if not (0 <= self.t_start < self.t_end):
            raise DomainError("time grid needs 0 <= t_start < t_end")
        if self.num_points < 2:
            raise DomainError("time grid needs at least two points")
        if self.scaling not in ("w", "g"):
            raise DomainError(f"scaling must be 'w' or 'g', got {self.scaling!r}")
        if not self.rate > 0:
            raise DomainError("rate must be positive")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.num_points)

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / (self.num_points - 1)

    @property
    def physical_times(self) -> np.ndarray:
        return self.times / self.rate


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: TimeGrid
    basis: Basis
    amplitudes: np.ndarray  # (num_points, len(basis))
    method: str
    regime: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.amplitudes.shape != (self.grid.num_points, len(self.basis)):
            raise DomainError("amplitude array does not match grid and basis")
        self.amplitudes.setflags(write=False)

    @property
    def times(self):
        return self.grid.times

    def state(self, i: int) -> StateVector:
        return StateVector(self.basis, self.amplitudes[i])

    def amplitude(self, state: BasisState) -> np.ndarray:
        return self.amplitudes[:, self.basis.index(state)]

    def population(self, state: BasisState) -> np.ndarray:
        return np.abs(self.amplitude(state)) ** 2

    @property
    def norm(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def coefficients(self) -> np.ndarray:
        """(num_points, 4) array of C11, C21, C12, C22."""
        return np.stack([self.amplitude(s) for s in COEFFICIENT_STATES], axis=1)

    def expectation(self, op: OperatorMatrix) -> np.ndarray:
        a = self.amplitudes
        return np.real(np.einsum("ti,ij,tj->t", a.conj(), op.matrix, a))


def _check_inputs(H: OperatorMatrix, psi0: StateVector):
    if H.basis != psi0.basis:
        raise DomainError("Hamiltonian and initial state use different bases")
    if not H.is_hermitian():
        raise NumericalError("Hamiltonian is not hermitian")
    if not psi0.is_normalized():
        raise DomainError(f"initial state is not normalised (norm {psi0.norm:.12g})")


def propagate_expm(H: OperatorMatrix, psi0: StateVector, grid: TimeGrid, regime: str = "") -> Trajectory:
    """psi(t) = exp(-i H t) psi0 through the eigendecomposition of H."""
    _check_inputs(H, psi0)
    try:
        energies, vecs = np.linalg.eigh(H.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    c0 = vecs.conj().T @ psi0.amplitudes
    t = grid.physical_times
    phases = np.exp(-1j * np.outer(t, energies))
    amps = (phases * c0) @ vecs.T
    return Trajectory(grid, H.basis, amps, "expm_oracle", regime)


def propagate_ode(H: OperatorMatrix, psi0: StateVector, grid: TimeGrid, tol: float = 1e-10,
                  regime: str = "") -> Trajectory:
    """Adaptive Runge-Kutta integration of i dpsi/dtau = (H / rate) psi.

    Uses the Dormand-Prince 5(4) pair with its dense output evaluated on the
    grid. ``tol`` bounds the global error against the exact propagator; the
    local step tolerance is set 100 times tighter to achieve it.
    """
    if not 1e-12 <= tol <= 1e-6:
        raise DomainError("tol must lie in [1e-12, 1e-6]")
    _check_inputs(H, psi0)
    m = -1j * np.asarray(H.matrix) / grid.rate
    times = grid.times
    sol = solve_ivp(
        lambda _, y: m @ y,
        (times[0], times[-1]),
        psi0.amplitudes.astype(complex),
        method="RK45",
        t_eval=times,
        rtol=max(tol * STEP_TOL_FACTOR, 2.3e-14),
        atol=tol * STEP_TOL_FACTOR,
    )
    if not sol.success:
        raise NumericalError(f"ODE integration failed: {sol.message}")
    return Trajectory(grid, H.basis, sol.y.T.copy(), "ode", regime)


def _coefficient_trajectory(grid, coeffs, regime, metadata):
    basis = build_basis(2, electronic=True)
    amps = np.zeros((grid.num_points, len(basis)), dtype=complex)
    for k, s in enumerate(COEFFICIENT_STATES):
        amps[:, basis.index(s)] = coeffs[k]
    return Trajectory(grid, basis, amps, "closed_form", regime, metadata)


def red_sideband_xi(chi: float) -> float:
    return math.sqrt(1.0 + chi * chi)


def closed_form_red_sideband(chi: float, grid: TimeGrid, phi_L: float = -math.pi / 2,
                             verbatim: bool = False) -> Trajectory:
    """Red-sideband dynamics on well 1 from |ground, well 1>|up>, ground tunneling neglected.

    With xi = sqrt(1 + chi^2) and tau = w t:

        C11 = (cos(xi tau) + xi^2 - 1) / xi^2
        C12 = -exp(-i phi_L) sin(xi tau) / xi
        C22 = -i exp(-i phi_L) chi (cos(xi tau) - 1) / xi^2

    At phi_L = -pi/2 this makes C12 = -i sin(xi tau) / xi. ``verbatim=True``
    returns the often-quoted form C12 = +i sin(xi tau) / xi,
    C22 = sqrt(xi^2 - 1)(cos(xi tau) - 1) / xi^2, which is not a solution
    of the Hamiltonian for any laser phase.
    """
    tau = grid.times
    xi = red_sideband_xi(chi)
    c = np.cos(xi * tau)
    s = np.sin(xi * tau)
    c11 = (c + xi * xi - 1.0) / (xi * xi) + 0j
    c21 = np.zeros_like(c11)
    if verbatim:
        c12 = 1j * s / xi
        c22 = math.sqrt(xi * xi - 1.0) * (c - 1.0) / (xi * xi) + 0j
    else:
        phase = np.exp(-1j * phi_L)
        c12 = -phase * s / xi
        c22 = -1j * phase * chi * (c - 1.0) / (xi * xi)
    meta = {"chi": chi, "xi": xi, "phi_L": phi_L, "verbatim": verbatim}
    return _coefficient_trajectory(grid, (c11, c21, c12, c22), "red_sideband_well1", meta)


def carrier_lambdas(chi_c: float):
    """Frequency multipliers (lambda_1, lambda_2) of the carrier beat, lambda_2 > lambda_1."""
    root = math.sqrt(1.0 + 4.0 * chi_c * chi_c)
    base = 1.0 + 2.0 * chi_c * chi_c
    # lambda_1^2 = (base - root) / 2 cancels; use lambda_1 lambda_2 = chi_c^2.
    lam2 = math.sqrt(0.5 * (base + root))
    lam1 = chi_c * chi_c / lam2
    return lam1, lam2


def closed_form_carrier(chi_c: float, grid: TimeGrid) -> np.ndarray:
    """P_down(g t) on well 1 for the carrier drive from |excited, well 1>|up>."""
    lam1, lam2 = carrier_lambdas(chi_c)
    gap = lam2 * lam2 - lam1 * lam1
    if gap <= 0:
        raise NumericalError("degenerate carrier frequencies")
    tau = grid.times
    return ((lam1 * np.sin(lam1 * tau) - lam2 * np.sin(lam2 * tau)) / gap) ** 2


def both_wells_lambdas(chi: float):
    """(lambda_1, lambda_2) with lambda_j^2 = 1 + (chi^2 + (-1)^j chi sqrt(4 + chi^2)) / 2."""
    root = math.sqrt(4.0 + chi * chi)
    lam2 = 0.5 * (root + abs(chi))
    lam1 = 0.5 * (root - abs(chi))
    return lam1, lam2


def closed_form_both_wells(chi: float, grid: TimeGrid, phi_L: float = -math.pi / 2,
                           verbatim: bool = False) -> Trajectory:
    """Red-sideband drive on both wells from |ground, well 1>|up>.

    The symmetric and antisymmetric well combinations decouple; their
    eigenfrequencies (in units of w) are mu_pm = (chi +/- sqrt(chi^2 + 4)) / 2
    and -mu_pm, with |mu| = lambda_1, lambda_2. Expanding the initial state:

        C11 = sum_mu cos(mu tau) / (1 + mu^2)
        C21 = -i sum_mu sin(mu tau) / (1 + mu^2)
        C12 = -exp(-i phi_L) sum_mu mu sin(mu tau) / (1 + mu^2)
        C22 = -i exp(-i phi_L) sum_mu mu cos(mu tau) / (1 + mu^2)

    ``verbatim=True`` evaluates the widely reproduced lambda-sum expressions
    term by term (time argument lambda_j w t); their C21 bracket is not a
    solution and the set is not normalised.
    """
    tau = grid.times
    phase = np.exp(-1j * phi_L)
    meta = {"chi": chi, "phi_L": phi_L, "verbatim": verbatim}
    if verbatim:
        coeffs = _both_wells_verbatim(chi, tau, phase)
    else:
        root = math.sqrt(chi * chi + 4.0)
        c11 = np.zeros_like(tau, dtype=complex)
        c21 = np.zeros_like(c11)
        c12 = np.zeros_like(c11)
        c22 = np.zeros_like(c11)
        for mu in (0.5 * (chi + root), 0.5 * (chi - root)):
            weight = 1.0 / (1.0 + mu * mu)
            c, s = np.cos(mu * tau), np.sin(mu * tau)
            c11 += weight * c
            c21 += -1j * weight * s
            c12 += -phase * weight * mu * s
            c22 += -1j * phase * weight * mu * c
        coeffs = (c11, c21, c12, c22)
    return _coefficient_trajectory(grid, coeffs, "red_sideband_both", meta)


def _both_wells_verbatim(chi, tau, phase):
    if abs(chi) < CHI_LIMIT:
        zero = np.zeros_like(tau, dtype=complex)
        return np.cos(tau) + 0j, zero, -phase * np.sin(tau), zero.copy()
    lam = both_wells_lambdas(chi)
    chi2 = chi * chi
    norm = chi2 + 4.0
    c11 = sum((chi2 - l * l + 3.0) * np.cos(l * tau) for l in lam) / norm + 0j
    c21 = 1j / (chi * norm) * sum(
        l * ((chi2 + 2.0) ** 2 - (chi2 + 2.0) * l * l) * np.sin(l * tau) for l in lam
    )
    c12 = phase / norm * sum(l * (l * l - chi2 - 3.0) * np.sin(l * tau) for l in lam)
    c22 = -1j * phase / (chi * norm) * sum((2.0 * l * l - chi2 - 2.0) * np.cos(l * tau) for l in lam)
    return c11, c21, c12, c22


def initial_state(name: str, basis: Basis = None) -> StateVector:
    """Named initial states: ``ground_up``, ``excited_up`` and ``excited_down`` (well 1)."""
    basis = basis or build_basis(2, electronic=True)
    states = {
        "ground_up": BasisState(1, 1, UP),
        "excited_up": BasisState(1, 2, UP),
        "excited_down": BasisState(1, 2, DOWN),
    }
    if name not in states:
        raise DomainError(f"unknown initial state {name!r}")
    return StateVector.basis_state(basis, states[name])
