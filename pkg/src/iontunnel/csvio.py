"""CSV output with units and provenance rows, JSON sidecars and plot scripts.

Every CSV starts with three header rows (column names, units, provenance)
followed by the samples. Floats are written with ``repr``, the shortest
string that round-trips, so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import DomainError
from .experiments import ObservableSeries


@dataclass(frozen=True)
class CsvSchema:
    columns: tuple
    units: tuple
    provenance: tuple

    def __post_init__(self):
        if not (len(self.columns) == len(self.units) == len(self.provenance)):
            raise DomainError("schema rows have different lengths")


def schema_for(series: ObservableSeries) -> CsvSchema:
    cols = tuple(series.columns)
    return CsvSchema(
        cols,
        tuple(series.units.get(c, "1") for c in cols),
        tuple(series.provenance.get(c, "") for c in cols),
    )


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    v = float(value)
    if math.isnan(v):
        return "nan"
    return repr(v)


def _json_default(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_metadata(path, metadata: dict) -> Path:
    meta = {"library_version": __version__, **metadata}
    side = Path(str(path) + ".meta.json")
    side.write_text(json.dumps(meta, indent=2, sort_keys=True, default=_json_default) + "\n")
    return side


def emit_series(series: ObservableSeries, path, schema: CsvSchema = None, metadata: dict = None) -> Path:
    """Write one observable series and its ``.meta.json`` sidecar."""
    schema = schema or schema_for(series)
    path = Path(path)
    cols = [series.columns[c] for c in schema.columns]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(schema.columns)
        w.writerow(schema.units)
        w.writerow(schema.provenance)
        for row in zip(*cols):
            w.writerow([fmt(v) for v in row])
    meta = {"series": series.metadata, "columns": list(schema.columns)}
    meta.update(metadata or {})
    write_metadata(path, meta)
    return path


def emit_table(rows, columns, path, metadata: dict = None, units=None) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerow(units or ["1"] * len(columns))
        w.writerow(["sweep"] * len(columns))
        for r in rows:
            w.writerow([fmt(r[c]) for c in columns])
    write_metadata(path, dict(metadata or {}, columns=list(columns)))
    return path


def read_series(path):
    """Read a CSV written by :func:`emit_series` into (columns, units, provenance, data)."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    names, units, prov = rows[:3]
    data = {n: [float(r[i]) for r in rows[3:]] for i, n in enumerate(names)}
    return names, units, prov, data


_PLOT_TEMPLATE = '''"""Plot {figure_id}; generated by iontunnel {version}."""
import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))

SERIES = {series!r}
PANELS = {panels!r}
XLABEL = {xlabel!r}


def load(path):
    with open(os.path.join(HERE, path), newline="") as fh:
        rows = list(csv.reader(fh))
    names = rows[0]
    return {{n: [float(r[i]) for r in rows[3:]] for i, n in enumerate(names)}}


def style(chi):
    if chi == 0.0:
        return ":"
    if chi == 1.0:
        return "-"
    return "--"


fig, axes = plt.subplots(len(PANELS), 1, figsize=(6, 3 * len(PANELS)), squeeze=False)
for ax, (column, title) in zip(axes[:, 0], PANELS):
    for chi, path in SERIES:
        data = load(path)
        ax.plot(data["t_scaled"], data[column], style(chi), color="k", label=f"chi = {{chi:g}}")
    ax.set_xlabel(XLABEL)
    ax.set_ylabel("P_down")
    ax.set_title(title)
    ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, {output!r}))
'''


def emit_plot_script(series_paths: dict, figure_id: str, path, image_name: str = None) -> Path:
    """Write a standalone matplotlib script plotting the given series files.

    ``series_paths`` maps chi to CSV path. chi = 0 is drawn dotted and chi = 1
    solid. The both-wells figure gets one panel per P_down definition.
    """
    if not series_paths:
        raise DomainError("no series to plot")
    missing = [str(p) for p in series_paths.values() if not Path(p).exists()]
    if missing:
        raise DomainError(f"missing series files: {', '.join(missing)}")
    if figure_id == "fig3":
        panels = [
            ("p_down_oracle", "P_down, incoherent (sum over wells)"),
            ("p_down_coherent_oracle", "P_down, coherent |C12 + C22|^2"),
        ]
    else:
        panels = [("p_down_oracle", "P_down")]
    xlabel = "g t" if figure_id == "fig2" else "eta g t"
    path = Path(path)
    text = _PLOT_TEMPLATE.format(
        figure_id=figure_id,
        version=__version__,
        series=[(float(chi), Path(p).name) for chi, p in series_paths.items()],
        panels=panels,
        xlabel=xlabel,
        output=image_name or f"{figure_id}.png",
    )
    path.write_text(text)
    return path
