"""Command-line entry point: ``iontunnel {geometry,simulate,figure,sweep,validate}``.

Exit codes: 0 success, 2 configuration or domain error, 3 numerical error or a
failed validation check. Errors are written to stderr as one JSON line.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import SPECIES_AMU, parse_config, resolve
from .errors import ConfigError, DomainError, NumericalError
from .geometry import IonSpecies

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"not a comma-separated float list: {text!r}") from None


def _read_config(path):
    try:
        return parse_config(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None


def cmd_geometry(args):
    from .runner import geometry_summary

    if (args.u is None) == (args.x0 is None):
        raise ConfigError("give exactly one of --u and --x0")
    name = args.species.lower()
    if args.mass_amu is None and name not in SPECIES_AMU:
        raise ConfigError(f"unknown species {args.species!r}; give --mass-amu")
    species = IonSpecies.from_amu(name, args.mass_amu or SPECIES_AMU[name])
    out = geometry_summary(species, args.omega0, args.u, args.x0, args.eta, args.g, args.convention,
                           args.quadrature)
    print(json.dumps(out, indent=2))


def cmd_simulate(args):
    from .runner import simulate

    for p in simulate(_read_config(args.config), args.out):
        print(p)


def cmd_figure(args):
    from .runner import figure

    chi = _floats(args.chi)
    if not chi:
        raise ConfigError("--chi needs at least one value")
    if args.config:
        cfg = _read_config(args.config)
        from dataclasses import asdict

        values = {k: v for k, v in asdict(cfg).items() if k not in ("u", "x0", "t_end", "num_points")}
        cfg = resolve(dict(values, regime=args.id, chi=chi))
    else:
        cfg = resolve({"regime": args.id, "chi": chi})
    for p in figure(args.id, chi, args.out, cfg):
        print(p)


def cmd_sweep(args):
    from .runner import run_sweep

    print(run_sweep(_read_config(args.config), args.out))


def cmd_validate(args):
    from .checks import run_all

    results = run_all()
    for n, r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] criterion {n} {r.name}: {r.detail}")
    failed = [n for n, r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_NUMERICAL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="iontunnel", description="Tunneling-assisted sideband dynamics of a trapped ion.")
    p.add_argument("--version", action="version", version=f"iontunnel {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("geometry", help="derive the double-well geometry and regime ratios")
    g.add_argument("--species", default="ca40")
    g.add_argument("--mass-amu", type=float)
    g.add_argument("--omega0", type=float, default=2e6)
    g.add_argument("--u", type=float)
    g.add_argument("--x0", type=float, help="half separation in m")
    g.add_argument("--eta", type=float, default=0.1)
    g.add_argument("--g", type=float, default=2e5)
    g.add_argument("--convention", choices=("plain", "angular"), default="plain")
    g.add_argument("--quadrature", action="store_true", help="also report quadrature rates")
    g.set_defaults(func=cmd_geometry)

    s = sub.add_parser("simulate", help="run the regime and chi values of a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("figure", help="reproduce fig1, fig2 or fig3")
    f.add_argument("--id", required=True, choices=("fig1", "fig2", "fig3"))
    f.add_argument("--chi", default="0,1")
    f.add_argument("--out")
    f.add_argument("--config")
    f.set_defaults(func=cmd_figure)

    w = sub.add_parser("sweep", help="one summary row per chi of a config file")
    w.add_argument("--config", required=True)
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("validate", help="run the self-check suite")
    v.set_defaults(func=cmd_validate)
    return p


def _fail(kind, exc, code):
    msg = " ".join(str(exc).split())
    print(json.dumps({"error": kind, "message": msg}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        rc = args.func(args)
    except (ConfigError, DomainError) as exc:
        return _fail(type(exc).__name__, exc, EXIT_CONFIG)
    except NumericalError as exc:
        return _fail("NumericalError", exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _fail("OSError", exc, EXIT_CONFIG)
    return rc or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
