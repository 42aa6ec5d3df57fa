"""Glue between a :class:`RunConfig`, the physics modules and the output files."""

from __future__ import annotations

import math
from dataclasses import asdict
from pathlib import Path

from . import csvio
from .config import RunConfig, config_dict, config_to_text
from .dynamics import TimeGrid
from .experiments import FIGURES, REGIME_FIGURE, SWEEP_COLUMNS, run_point, sweep
from .geometry import (
    HBAR,
    angular,
    closed_form_rates,
    derive_geometry,
    geometry_from_x0,
    regime_report,
)
from .errors import NumericalError
from .modes import coupling_element, default_quadrature

OUTPUT_ENV = "IONTUNNEL_OUTPUT_DIR"

CONVENTIONS = {
    "closed_form_red_sideband": (
        "C12 = -exp(-i phi_L) sin(xi w t)/xi, C22 = -i exp(-i phi_L) chi (cos(xi w t) - 1)/xi^2; "
        "the +i sin(xi w t)/xi form is available as verbatim=True and deviates from the propagator"
    ),
    "closed_form_both_wells": (
        "eigen-expansion over mu = (chi +/- sqrt(chi^2 + 4))/2 with time argument lambda_j * eta g t; "
        "the lambda-sum C21 bracket is not a solution and is kept only as verbatim=True"
    ),
    "coefficient_state_labels": "C21 and C22 are time dependent amplitudes",
    "carrier_p_down": "the whole bracket is squared",
    "both_wells_drive": "coupling eta g in both wells",
    "both_wells_p_down_default": "incoherent |C12|^2 + |C22|^2; coherent |C12 + C22|^2 emitted alongside",
    "debye_waller_factor": "set to 1 unless ld_scalar_factor, which applies exp(-eta^2)",
    "coupling_reference_potential": "parabola of well 1 only",
    "carrier_u_estimate": "u = 10.8 used by default; 10.3 is also quoted for the same regime",
    "rate_sign": "closed-form rates are positive; quadrature rates keep their sign (R1 < 0, R2 > 0)",
    "frequency_units": "omega0 and g taken as s^-1 unless angular_frequency_convention = angular",
}


def output_dir(cfg_dir: str = None) -> Path:
    import os

    d = Path(os.environ.get(OUTPUT_ENV) or cfg_dir or "out")
    d.mkdir(parents=True, exist_ok=True)
    return d


def model_parameters(cfg: RunConfig) -> dict:
    """Derived trap and drive parameters; rates R1, R2 in s^-1 (R / hbar)."""
    omega0 = angular(cfg.omega0, cfg.angular_frequency_convention)
    g = angular(cfg.g, cfg.angular_frequency_convention)
    regime = cfg.regime_name
    scale = g if regime == "carrier_well1" else cfg.eta * g
    out = {"omega0": omega0, "g": g, "eta": cfg.eta, "w": cfg.eta * g, "regime": regime}
    if cfg.chi is not None:
        out.update(source="chi", chi_values=list(cfg.chi), R1=0.0, rate_source="chi_override")
        return out
    if cfg.x0 is not None:
        geo = geometry_from_x0(cfg.species, omega0, cfg.x0)
    else:
        geo = derive_geometry(cfg.species, omega0, cfg.u)
    om1, om2, r1, r2 = closed_form_rates(geo)
    report = regime_report(geo, cfg.eta, g)
    out["geometry"] = asdict(geo)
    out["separation_m"] = geo.separation
    out["Omega1"], out["Omega2"] = om1, om2
    out["report"] = {
        "epsilon": report.epsilon,
        "ratio_R1_R2": report.ratio_R1_R2,
        "ratio_R2_E0": report.ratio_R2_E0,
        "chi": report.chi,
        "xi": report.xi,
        "chi_carrier": report.chi_carrier,
        "flags": [asdict(f) for f in report.flags],
    }
    if cfg.use_quadrature_rates:
        q = default_quadrature(geo)
        r1 = coupling_element(1, geo, q)
        r2 = coupling_element(2, geo, q)
        out["rate_source"] = "quadrature"
    else:
        out["rate_source"] = "closed_form"
    out["R1"], out["R2"] = r1 / HBAR, r2 / HBAR
    out["chi_values"] = [out["R2"] / scale]
    out["source"] = cfg.tunneling_source
    return out


def _grid(cfg: RunConfig) -> TimeGrid:
    scaling = "g" if cfg.regime_name == "carrier_well1" else "w"
    return TimeGrid(cfg.t_start, cfg.t_end, cfg.num_points, scaling)


def _metadata(cfg, params):
    return {
        "config": config_dict(cfg),
        "config_text": config_to_text(cfg),
        "derived": params,
        "conventions": CONVENTIONS,
    }


def _slug(chi: float) -> str:
    return f"{chi:g}".replace("-", "m").replace(".", "p")


def simulate(cfg: RunConfig, directory=None) -> list:
    """Run every chi of the config and write one CSV per chi. Returns the paths."""
    params = model_parameters(cfg)
    out = output_dir(directory or cfg.directory)
    paths = []
    label = cfg.regime if cfg.regime in FIGURES else params["regime"]
    for chi in params["chi_values"]:
        series = run_point(params["regime"], chi, _grid(cfg), cfg.eta, params["g"], cfg.phi_L,
                           params["R1"], cfg.levels, cfg.ld_scalar_factor)
        path = out / f"{label}_chi{_slug(chi)}.csv"
        csvio.emit_series(series, path, metadata=_metadata(cfg, params))
        paths.append(path)
    return paths


def figure(figure_id: str, chi_values, directory=None, cfg: RunConfig = None) -> list:
    """Reproduce one figure; writes a CSV per chi plus a plotting script."""
    from .config import resolve

    cfg = cfg or resolve({"regime": figure_id, "chi": tuple(chi_values)})
    out = output_dir(directory or cfg.directory)
    params = model_parameters(cfg)
    series_paths = {}
    for chi in chi_values:
        series = run_point(FIGURES[figure_id]["regime"], chi, _grid(cfg), cfg.eta, params["g"], cfg.phi_L)
        path = out / f"{figure_id}_chi{_slug(chi)}.csv"
        csvio.emit_series(series, path, metadata=_metadata(cfg, params))
        series_paths[chi] = path
    script = csvio.emit_plot_script(series_paths, figure_id, out / f"plot_{figure_id}.py")
    return list(series_paths.values()) + [script]


def run_sweep(cfg: RunConfig, directory=None) -> Path:
    params = model_parameters(cfg)
    out = output_dir(directory or cfg.directory)
    rows = sweep(params["regime"], params["chi_values"], _grid(cfg), cfg.eta, params["g"], params["omega0"])
    label = REGIME_FIGURE.get(params["regime"], params["regime"])
    units = ["1", "1", "rate units", "1", "1", "1", "1"]
    return csvio.emit_table(rows, SWEEP_COLUMNS, out / f"sweep_{label}.csv", _metadata(cfg, params), units)


def geometry_summary(species, omega0, u=None, x0=None, eta=0.1, g=2e5, convention="plain",
                     quadrature=False) -> dict:
    omega0 = angular(omega0, convention)
    g = angular(g, convention)
    geo = geometry_from_x0(species, omega0, x0) if x0 is not None else derive_geometry(species, omega0, u)
    om1, om2, r1, r2 = closed_form_rates(geo)
    report = regime_report(geo, eta, g)
    out = {
        "species": species.name,
        "mass_kg": geo.mass,
        "omega0": geo.omega0,
        "u": geo.u,
        "delta_x_m": geo.delta_x,
        "x0_m": geo.x0,
        "separation_m": geo.separation,
        "b_J_per_m4": geo.b,
        "d_J_per_m2": geo.d,
        "barrier_J": geo.barrier_h,
        "Omega1": om1,
        "Omega2": om2,
        "R1_J": r1,
        "R2_J": r2,
        "epsilon": report.epsilon,
        "ratio_R1_R2": report.ratio_R1_R2,
        "ratio_R2_E0": report.ratio_R2_E0,
        "chi": report.chi,
        "xi": report.xi,
        "chi_carrier": report.chi_carrier,
        "flags": {f.constraint: f.passed for f in report.flags},
    }
    if quadrature:
        q = default_quadrature(geo)
        out["R1_quadrature_J"] = coupling_element(1, geo, q)
        out["R2_quadrature_J"] = coupling_element(2, geo, q)
    if not all(math.isfinite(v) for v in out.values() if isinstance(v, float)):
        raise NumericalError("non-finite geometry value")
    return out
