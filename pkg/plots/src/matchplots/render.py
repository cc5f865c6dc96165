"""Render experiment CSV tables into deterministic figures.

Four figure kinds are supported, one per experiment CSV schema:

* ``uniformity``: matching fraction vs alpha, one curve per family with a
  shaded +-1 standard-deviation band, one panel per dimension column value;
* ``radius-vs-volume``: one panel per family, one banded curve per
  parametrization;
* ``markov-validation``: one panel per swept parameter, banded simulation
  curve plus markers for the stationary-chain formula;
* ``bounds``: one panel per sweep, banded simulation curve with lower and
  upper bound overlays.

Rendering is a pure function of the CSV bytes: figure geometry, fonts and the
SVG hash salt are pinned, and no timestamps are embedded.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

__all__ = ["PlotSpec", "MissingColumnError", "EmptyDataError", "render"]

KINDS = ("uniformity", "radius-vs-volume", "markov-validation", "bounds")

_REQUIRED_COLUMNS = {
    "uniformity": ("family", "k", "alpha", "mean_fraction", "std_dev"),
    "radius-vs-volume": (
        "family",
        "parametrization",
        "alpha",
        "mean_fraction",
        "std_dev",
    ),
    "markov-validation": ("sweep", "value", "mean_fraction", "std_dev", "formula_fraction"),
    "bounds": ("panel", "value", "mean_fraction", "std_dev", "lower_bound", "upper_bound"),
}

_DEFAULT_XLABEL = {
    "uniformity": "alpha",
    "radius-vs-volume": "alpha",
    "markov-validation": "swept parameter",
    "bounds": "swept parameter",
}

# Fixed render parameters keep output bytes stable across runs.
_FIGWIDTH_PER_PANEL = 3.4
_FIGHEIGHT = 3.0
_STYLE = {
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "svg.hashsalt": "matchplots",
    "svg.fonttype": "none",
    "figure.dpi": 100,
    "savefig.dpi": 100,
}


class MissingColumnError(ValueError):
    """A figure kind's required CSV column is absent."""


class EmptyDataError(ValueError):
    """The CSV parsed but contains no data rows."""


@dataclass(frozen=True)
class PlotSpec:
    """What to render: input tables, figure kind, output path, axis labels."""

    inputs: tuple[str, ...]
    kind: str
    output: str
    xlabel: str = ""
    ylabel: str = "matching fraction"
    raster: bool = False

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not self.xlabel:
            object.__setattr__(self, "xlabel", _DEFAULT_XLABEL[self.kind])


def _read_rows(paths: tuple[str, ...], kind: str) -> list[dict[str, str]]:
    rows: list[dict[str, str]] = []
    required = _REQUIRED_COLUMNS[kind]
    for path in paths:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise MissingColumnError(
                        f"{path}: column {column!r} required for kind {kind!r} is missing"
                    )
            rows.extend(reader)
    if not rows:
        raise EmptyDataError(f"no data rows in {', '.join(paths)}")
    return rows


def _series(rows: list[dict[str, str]], x: str, y: str) -> tuple[list[float], list[float]]:
    pairs = sorted((float(r[x]), float(r[y])) for r in rows)
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _banded(ax, rows, x, label) -> None:
    xs, means = _series(rows, x, "mean_fraction")
    _, stds = _series(rows, x, "std_dev")
    ax.plot(xs, means, label=label, linewidth=1.2)
    ax.fill_between(
        xs,
        [m - s for m, s in zip(means, stds)],
        [m + s for m, s in zip(means, stds)],
        alpha=0.25,
        linewidth=0,
    )


def _groups(rows, column) -> list[tuple[str, list[dict[str, str]]]]:
    order: list[str] = []
    grouped: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        key = row[column]
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append(row)
    return [(key, grouped[key]) for key in order]


def render(spec: PlotSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    rows = _read_rows(spec.inputs, spec.kind)
    with plt.rc_context(_STYLE):
        if spec.kind == "uniformity":
            panels = _groups(rows, "k")
            fig, axes = _panel_axes(len(panels))
            for ax, (k, panel_rows) in zip(axes, panels):
                for family, family_rows in _groups(panel_rows, "family"):
                    _banded(ax, family_rows, "alpha", family)
                ax.set_title(f"k = {k}")
        elif spec.kind == "radius-vs-volume":
            panels = _groups(rows, "family")
            fig, axes = _panel_axes(len(panels))
            for ax, (family, panel_rows) in zip(axes, panels):
                for par, par_rows in _groups(panel_rows, "parametrization"):
                    _banded(ax, par_rows, "alpha", par)
                ax.set_title(family)
        elif spec.kind == "markov-validation":
            panels = _groups(rows, "sweep")
            fig, axes = _panel_axes(len(panels))
            for ax, (sweep, panel_rows) in zip(axes, panels):
                _banded(ax, panel_rows, "value", "simulated")
                xs, formula = _series(panel_rows, "value", "formula_fraction")
                ax.plot(xs, formula, "o", markersize=3.5, fillstyle="none", label="formula")
                ax.set_title(f"varying {sweep}")
        else:
            panels = _groups(rows, "panel")
            fig, axes = _panel_axes(len(panels))
            for ax, (panel, panel_rows) in zip(axes, panels):
                _banded(ax, panel_rows, "value", "simulated")
                xs, lower = _series(panel_rows, "value", "lower_bound")
                _, upper = _series(panel_rows, "value", "upper_bound")
                ax.plot(xs, lower, "--", linewidth=1.0, label="lower bound")
                ax.plot(xs, upper, ":", linewidth=1.0, label="upper bound")
                ax.set_title(f"varying {panel}")
        for ax in axes:
            ax.set_xlabel(spec.xlabel)
            ax.legend(frameon=False, fontsize=7)
        axes[0].set_ylabel(spec.ylabel)
        fig.tight_layout()
        fig.savefig(spec.output, metadata=_clean_metadata(spec))
        plt.close(fig)
    return spec.output


def _panel_axes(count: int):
    fig, axes = plt.subplots(
        1, count, figsize=(_FIGWIDTH_PER_PANEL * count, _FIGHEIGHT), squeeze=False
    )
    return fig, list(axes[0])


def _clean_metadata(spec: PlotSpec) -> dict | None:
    if spec.output.endswith(".svg"):
        return {"Date": None}
    if spec.output.endswith(".png"):
        return {"Software": None}
    return None
