"""Run configuration: INI-style ``key = value`` text in named sections.

Keys before the first section header belong to ``[run]``, so a minimal
configuration can be just::

    regime = fig1
    chi = 1
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, replace
from typing import Optional

from .errors import ConfigError, DomainError
from .experiments import FIGURES, default_grid
from .geometry import IonSpecies
from .hamiltonians import REGIMES

SCHEMA = {
    "species": {"name": str, "mass_amu": float},
    "trap": {"omega0": float, "u": float, "x0": float},
    "laser": {"eta": float, "g": float, "phi_L": float},
    "run": {"regime": str, "chi": "floats", "levels": int},
    "grid": {"t_start": float, "t_end": float, "num_points": int},
    "output": {"directory": str},
    "flags": {
        "angular_frequency_convention": str,
        "use_quadrature_rates": bool,
        "ld_scalar_factor": bool,
    },
}

SPECIES_AMU = {"ca40": 40.0}
DEFAULT_U = {"carrier_well1": 10.8}
DEFAULT_U_OTHER = 17.3


def resolve_regime(name: str) -> str:
    if name in FIGURES:
        return FIGURES[name]["regime"]
    if name in REGIMES:
        return name
    raise ConfigError(f"unknown regime {name!r}")


@dataclass(frozen=True)
class RunConfig:
    species_name: str = "ca40"
    mass_amu: float = 40.0
    omega0: float = 2e6
    u: Optional[float] = None
    x0: Optional[float] = None
    eta: float = 0.1
    g: float = 2e5
    phi_L: float = -math.pi / 2
    regime: str = "fig1"
    chi: Optional[tuple] = None
    levels: int = 2
    t_start: float = 0.0
    t_end: float = 6 * math.pi
    num_points: int = 2001
    directory: str = "out"
    angular_frequency_convention: str = "plain"
    use_quadrature_rates: bool = False
    ld_scalar_factor: bool = False

    @property
    def regime_name(self) -> str:
        return resolve_regime(self.regime)

    @property
    def species(self) -> IonSpecies:
        return IonSpecies.from_amu(self.species_name, self.mass_amu)

    @property
    def tunneling_source(self) -> str:
        for key in ("chi", "x0", "u"):
            if getattr(self, key) is not None:
                return key
        return "u"


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _convert(section, key, text):
    kind = SCHEMA[section][key]
    try:
        if kind == "floats":
            return tuple(float(v) for v in text.split(",") if v.strip())
        if kind is bool:
            return _parse_bool(text)
        if kind is str:
            return text.strip()
        return kind(text)
    except ValueError:
        raise ConfigError(f"bad value for {section}.{key}: {text!r}") from None


FIELD_OF = {("species", "name"): "species_name"}


def parse_config(text: str) -> RunConfig:
    """Parse configuration text into a fully resolved :class:`RunConfig`."""
    stripped = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith(("#", ";"))]
    if stripped and not stripped[0].startswith("["):
        text = "[run]\n" + text
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}".replace("\n", " ")) from None
    values = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            values[FIELD_OF.get((section, key), key)] = _convert(section, key, raw)
    return resolve(values)


def resolve(values: dict) -> RunConfig:
    """Apply defaults and consistency checks to a dict of RunConfig fields."""
    sources = [k for k in ("u", "x0", "chi") if values.get(k) is not None]
    if len(sources) > 1:
        raise ConfigError(f"conflicting tunneling-strength sources: {', '.join(sources)}")
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    regime = cfg.regime_name
    if cfg.angular_frequency_convention not in ("plain", "angular"):
        raise ConfigError(f"unknown angular_frequency_convention {cfg.angular_frequency_convention!r}")
    if "mass_amu" not in values:
        if cfg.species_name not in SPECIES_AMU:
            raise ConfigError(f"unknown species {cfg.species_name!r}; give mass_amu")
        cfg = replace(cfg, mass_amu=SPECIES_AMU[cfg.species_name])
    if not sources:
        cfg = replace(cfg, u=DEFAULT_U.get(regime, DEFAULT_U_OTHER))
    grid = default_grid(regime)
    if "t_end" not in values:
        cfg = replace(cfg, t_end=grid.t_end)
    if "num_points" not in values:
        cfg = replace(cfg, num_points=grid.num_points)
    if cfg.chi is not None and not cfg.chi:
        raise ConfigError("chi list is empty")
    try:
        cfg.species
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) for x in v)
    return str(v)


def config_to_text(cfg: RunConfig) -> str:
    """Canonical text of a resolved config; ``parse_config`` reads it back unchanged."""
    d = asdict(cfg)
    lines = []
    for section, keys in SCHEMA.items():
        lines.append(f"[{section}]")
        for key in keys:
            v = d[FIELD_OF.get((section, key), key)]
            if v is None:
                continue
            lines.append(f"{key} = {_fmt(v)}")
        lines.append("")
    return "\n".join(lines)


def config_dict(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    if d["chi"] is not None:
        d["chi"] = list(d["chi"])
    return d
