"""Observables, figure reproduction and parameter sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import dynamics as dyn
from .errors import DomainError
from .geometry import CA40, derive_geometry, regime_report, u_for_chi
from .hamiltonians import RegimeParams, build_hamiltonian
from .hilbert import DOWN, BasisState, StateVector, down_projector

PROB_TOL = 1e-9

DEFAULT_ETA = 0.1
DEFAULT_G = 2e5  # s^-1
DEFAULT_OMEGA0 = 2e6  # s^-1


@dataclass(frozen=True)
class ObservableSeries:
    grid: dyn.TimeGrid
    columns: dict
    units: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, col in self.columns.items():
            if len(col) != self.grid.num_points:
                raise DomainError(f"column {name!r} has the wrong length")

    def __getitem__(self, name):
        return self.columns[name]


FIGURES = {
    "fig1": {"regime": "red_sideband_well1", "initial": "ground_up", "scaling": "w"},
    "fig2": {"regime": "carrier_well1", "initial": "excited_up", "scaling": "g"},
    "fig3": {"regime": "red_sideband_both", "initial": "ground_up", "scaling": "w"},
}
REGIME_FIGURE = {v["regime"]: k for k, v in FIGURES.items()}


def default_grid(regime: str, rate: float = 1.0) -> dyn.TimeGrid:
    if regime == "carrier_well1":
        return dyn.TimeGrid(0.0, 12 * math.pi, 4001, "g", rate)
    return dyn.TimeGrid(0.0, 6 * math.pi, 2001, "w", rate)


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    chi_values: tuple = (0.0, 1.0)
    grid: dyn.TimeGrid = None

    def __post_init__(self):
        if self.figure_id not in FIGURES:
            raise DomainError(f"unknown figure {self.figure_id!r}")
        if not self.chi_values:
            raise DomainError("need at least one chi value")

    @property
    def regime(self) -> str:
        return FIGURES[self.figure_id]["regime"]

    @property
    def initial(self) -> str:
        return FIGURES[self.figure_id]["initial"]


def _require_regime(traj, *regimes):
    if traj.regime not in regimes:
        raise DomainError(f"trajectory regime {traj.regime!r} is not one of {regimes}")


def p_down_well1(traj: dyn.Trajectory) -> np.ndarray:
    """Population of the first-excited level of well 1 with the spin down."""
    _require_regime(traj, "red_sideband_well1", "extended_LD")
    return traj.population(BasisState(1, 2, DOWN))


def p_down_carrier(traj: dyn.Trajectory) -> np.ndarray:
    _require_regime(traj, "carrier_well1")
    return traj.population(BasisState(1, 2, DOWN))


def p_down_both(traj: dyn.Trajectory):
    """(coherent, incoherent) spin-down signal when both wells are probed.

    ``coherent`` is |C12 + C22|^2; ``incoherent`` is |C12|^2 + |C22|^2, the
    Born-rule probability summed over the two orthogonal motional outcomes.
    """
    _require_regime(traj, "red_sideband_both")
    c12 = traj.amplitude(BasisState(1, 2, DOWN))
    c22 = traj.amplitude(BasisState(2, 2, DOWN))
    return np.abs(c12 + c22) ** 2, np.abs(c12) ** 2 + np.abs(c22) ** 2


def fidelity(state: StateVector, target: StateVector) -> float:
    if state.basis != target.basis:
        raise DomainError("fidelity needs states in the same basis")
    return float(abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2)


def peaks(series, times):
    """Interior local maxima refined by a parabola through the three samples.

    Returns ``(positions, heights)``.
    """
    y = np.asarray(series, dtype=float)
    t = np.asarray(times, dtype=float)
    idx = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    h = t[1] - t[0]
    ym, y0, yp = y[idx - 1], y[idx], y[idx + 1]
    curv = ym - 2 * y0 + yp
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(curv < 0, 0.5 * (ym - yp) / curv, 0.0)
    pos = t[idx] + shift * h
    height = y0 - 0.25 * (ym - yp) * shift
    return pos, height


def oscillation_frequency(series, times) -> float:
    """pi over the mean spacing of successive maxima.

    For P = sin^2(f t) / const this returns f. NaN with fewer than two maxima.
    """
    pos, _ = peaks(series, times)
    if len(pos) < 2:
        return float("nan")
    return math.pi / float(np.mean(np.diff(pos)))


def max_amplitude(series, times) -> float:
    _, heights = peaks(series, times)
    y = float(np.max(series))
    return max(y, float(np.max(heights))) if len(heights) else y


def regime_params(regime: str, chi: float, eta: float = DEFAULT_ETA, g: float = DEFAULT_G,
                  phi_L: float = -math.pi / 2, R1: float = 0.0) -> RegimeParams:
    """Parameters with R2 fixed by chi (R2 / (eta g), or R2 / g for the carrier)."""
    scale = g if regime == "carrier_well1" else eta * g
    return RegimeParams(R1, chi * scale, g, eta, phi_L, regime)


def _closed_form(regime, chi, grid, phi_L, verbatim=False):
    if regime == "red_sideband_well1":
        return dyn.closed_form_red_sideband(chi, grid, phi_L, verbatim=verbatim)
    if regime == "red_sideband_both":
        return dyn.closed_form_both_wells(chi, grid, phi_L, verbatim=verbatim)
    raise DomainError(f"no closed-form coefficients for {regime}")


def run_point(regime: str, chi: float, grid: dyn.TimeGrid = None, eta: float = DEFAULT_ETA,
              g: float = DEFAULT_G, phi_L: float = -math.pi / 2, R1: float = 0.0,
              levels: int = 2, ld_scalar_factor: bool = False) -> ObservableSeries:
    """Closed-form and oracle P_down for one (regime, chi) point."""
    p = regime_params(regime, chi, eta, g, phi_L, R1)
    rate = p.g if regime == "carrier_well1" else p.w
    grid = grid or default_grid(regime, rate)
    if grid.rate != rate:
        grid = dyn.TimeGrid(grid.t_start, grid.t_end, grid.num_points, grid.scaling, rate)
    kwargs = {"ld_scalar_factor": ld_scalar_factor} if regime == "extended_LD" else {}
    H = build_hamiltonian(p, levels, **kwargs)
    initial = "excited_up" if regime == "carrier_well1" else "ground_up"
    oracle = dyn.propagate_expm(H, dyn.initial_state(initial, H.basis), grid, regime)
    t = grid.times
    cols = {"t_scaled": t}
    prov = {"t_scaled": "grid"}
    meta = {"regime": regime, "chi": chi, "eta": eta, "g": g, "phi_L": phi_L, "R1": R1}

    if regime == "carrier_well1":
        cols["p_down_closed"] = dyn.closed_form_carrier(chi, grid)
        cols["p_down_oracle"] = p_down_carrier(oracle)
        meta["lambdas"] = list(dyn.carrier_lambdas(chi))
    elif regime in ("red_sideband_well1", "extended_LD"):
        cf = dyn.closed_form_red_sideband(chi, grid, phi_L)
        cols["p_down_closed"] = p_down_well1(cf)
        cols["p_down_oracle"] = p_down_well1(oracle)
        if regime == "red_sideband_well1" and R1 == 0.0:
            verb = dyn.closed_form_red_sideband(chi, grid, phi_L, verbatim=True)
            meta["coefficient_deviation"] = _dev(cf.coefficients(), oracle.coefficients())
            meta["verbatim_coefficient_deviation"] = _dev(verb.coefficients(), oracle.coefficients())
    else:
        cf = dyn.closed_form_both_wells(chi, grid, phi_L)
        verb = dyn.closed_form_both_wells(chi, grid, phi_L, verbatim=True)
        coh_c, inc_c = p_down_both(cf)
        coh_o, inc_o = p_down_both(oracle)
        cols["p_down_closed"] = inc_c
        cols["p_down_oracle"] = inc_o
        cols["p_down_coherent_closed"] = coh_c
        cols["p_down_coherent_oracle"] = coh_o
        prov.update(p_down_coherent_closed="closed_form", p_down_coherent_oracle="expm_oracle")
        meta["coefficient_deviation"] = _dev(cf.coefficients(), oracle.coefficients())
        meta["verbatim_coefficient_deviation"] = _dev(verb.coefficients(), oracle.coefficients())
        meta["verbatim_norm_deviation"] = float(np.max(np.abs(verb.norm - 1.0)))
        meta["down_projector_deviation"] = _dev(inc_o, oracle.expectation(down_projector(oracle.basis)))
        meta["lambdas"] = list(dyn.both_wells_lambdas(chi))
    cols["norm"] = oracle.norm
    prov.update(p_down_closed="closed_form", p_down_oracle="expm_oracle", norm="expm_oracle")
    meta["max_deviation"] = _dev(cols["p_down_closed"], cols["p_down_oracle"])
    units = {k: "1" for k in cols}
    units["t_scaled"] = "rad (g t)" if regime == "carrier_well1" else "rad (eta g t)"
    return ObservableSeries(grid, cols, units, prov, meta)


def _dev(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def reproduce_figure(spec: FigureSpec, eta: float = DEFAULT_ETA, g: float = DEFAULT_G,
                     phi_L: float = -math.pi / 2) -> dict:
    """Series for every chi of the figure, keyed by chi in input order."""
    return {chi: run_point(spec.regime, chi, spec.grid, eta, g, phi_L) for chi in spec.chi_values}


def _flags_for(regime, chi, eta, g, omega0):
    if chi == 0:
        return "u=inf;all:pass", True
    scale_eta = 1.0 if regime == "carrier_well1" else eta
    u = u_for_chi(abs(chi), omega0, scale_eta, g)
    report = regime_report(derive_geometry(CA40, omega0, u), eta, g)
    text = ";".join(f"{f.constraint}:{'pass' if f.passed else 'fail'}" for f in report.flags)
    return f"u={u:.6g};{text}", report.all_passed


def sweep_row(regime: str, chi: float, grid: dyn.TimeGrid = None, eta: float = DEFAULT_ETA,
              g: float = DEFAULT_G, omega0: float = DEFAULT_OMEGA0) -> dict:
    series = run_point(regime, chi, grid, eta, g)
    t = series["t_scaled"]
    p = series["p_down_oracle"]
    flags, ok = _flags_for(regime, chi, eta, g, omega0)
    return {
        "chi": chi,
        "xi": math.sqrt(1.0 + chi * chi),
        "frequency": oscillation_frequency(p, t),
        "amplitude": max_amplitude(p, t),
        "max_deviation": series.metadata["max_deviation"],
        "regime_ok": ok,
        "flags": flags,
    }


SWEEP_COLUMNS = ("chi", "xi", "frequency", "amplitude", "max_deviation", "regime_ok", "flags")


def sweep(regime: str, chi_values, grid: dyn.TimeGrid = None, eta: float = DEFAULT_ETA,
          g: float = DEFAULT_G, omega0: float = DEFAULT_OMEGA0, workers: int = 1) -> list:
    """One summary row per chi, in input order.

    ``frequency`` is in units of the grid scaling rate; ``amplitude`` is the
    parabola-refined maximum of the oracle P_down.
    """
    chi_values = list(chi_values)
    if not chi_values:
        raise DomainError("sweep needs at least one chi value")

    def row(chi):
        return sweep_row(regime, chi, grid, eta, g, omega0)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(row, chi_values))
    return [row(chi) for chi in chi_values]
