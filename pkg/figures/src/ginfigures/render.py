"""Render sympgin CSV outputs into static figures.

Three panel types cover the standard outputs:

  scatter        eigenvalue cloud (columns re, im) with the droplet ellipse
                 overlay of semi-axes sqrt(2)(1 +- tau)
  surface        limiting density over a grid (columns re_z, im_z + a value
                 column, default R_limit)
  cross_section  density profiles along a line (one varying coordinate),
                 selected y-columns plus an optional reference curve and
                 fitted-limit circles

No numeric logic lives here: every number is read from the CSV, which is the
interface contract with the kernel CLI.  Styling is fixed (figure size, dpi,
markers) so that byte-identical inputs produce identical images.

Invoked as: ginfigures-render --spec <spec.json>
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["SchemaError", "FigureSpec", "render", "main"]

_FIGSIZE = (6.4, 4.8)
_DPI = 110
_PANELS = ("scatter", "surface", "cross_section")


class SchemaError(ValueError):
    """CSV does not provide the columns the panel needs."""


@dataclass(frozen=True)
class FigureSpec:
    """Declarative description of one output figure."""

    panel: str
    input_csv: str
    output: str
    overlay: dict = field(default_factory=dict)   # e.g. {"tau": 0.5}
    value_column: str = "R_limit"                 # surface panel
    x_column: str | None = None                   # cross_section panel
    y_columns: tuple = ()                         # cross_section panel
    reference_column: str | None = None
    circles_column: str | None = None
    title: str = ""

    def __post_init__(self):
        if self.panel not in _PANELS:
            raise ValueError(f"unknown panel {self.panel!r}; choose from {_PANELS}")

    @classmethod
    def from_json(cls, path: str) -> "FigureSpec":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        raw["y_columns"] = tuple(raw.get("y_columns", ()))
        return cls(**raw)


def _load_csv(path: str) -> dict[str, np.ndarray]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty CSV (no header)") from None
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.array([[float(x) for x in row] for row in rows])
    if data.shape[1] != len(header):
        raise SchemaError(f"{path}: ragged rows")
    return {name: data[:, i] for i, name in enumerate(header)}


def _require(cols: dict, names, path: str) -> None:
    for name in names:
        if name not in cols:
            raise SchemaError(f"{path}: missing required column '{name}'")


def _droplet_overlay(ax, tau: float) -> None:
    t = np.linspace(0.0, 2.0 * math.pi, 400)
    a = math.sqrt(2.0) * (1.0 + tau)
    b = math.sqrt(2.0) * (1.0 - tau)
    ax.plot(a * np.cos(t), b * np.sin(t), color="black", lw=1.2, zorder=3)


def _panel_scatter(spec: FigureSpec, cols: dict, ax) -> None:
    _require(cols, ("re", "im"), spec.input_csv)
    ax.scatter(cols["re"], cols["im"], s=4.0, color="#1f77b4", linewidths=0)
    ax.scatter(cols["re"], -cols["im"], s=4.0, color="#1f77b4", linewidths=0)
    if "tau" in spec.overlay:
        _droplet_overlay(ax, float(spec.overlay["tau"]))
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal")


def _panel_surface(spec: FigureSpec, cols: dict, fig, ax) -> None:
    _require(cols, ("re_z", "im_z", spec.value_column), spec.input_csv)
    xs = np.unique(cols["re_z"])
    ys = np.unique(cols["im_z"])
    if xs.size * ys.size != cols["re_z"].size:
        raise SchemaError(f"{spec.input_csv}: rows do not form a full grid")
    order = np.lexsort((cols["re_z"], cols["im_z"]))
    Z = cols[spec.value_column][order].reshape(ys.size, xs.size)
    fig.delaxes(ax)
    ax3 = fig.add_subplot(111, projection="3d")
    X, Y = np.meshgrid(xs, ys)
    ax3.plot_surface(X, Y, Z, cmap="viridis", rstride=1, cstride=1,
                     antialiased=True)
    ax3.set_xlabel("Re z")
    ax3.set_ylabel("Im z")
    ax3.set_zlabel(spec.value_column)
    if spec.title:
        ax3.set_title(spec.title)


def _panel_cross_section(spec: FigureSpec, cols: dict, ax) -> None:
    _require(cols, ("re_z", "im_z"), spec.input_csv)
    x_col = spec.x_column
    if x_col is None:
        x_col = "re_z" if np.unique(cols["re_z"]).size > 1 else "im_z"
    wanted = [x_col, *spec.y_columns]
    if spec.reference_column:
        wanted.append(spec.reference_column)
    if spec.circles_column:
        wanted.append(spec.circles_column)
    _require(cols, wanted, spec.input_csv)
    x = cols[x_col]
    for name in spec.y_columns:
        ax.plot(x, cols[name], lw=1.1, label=name)
    if spec.reference_column:
        ax.plot(x, cols[spec.reference_column], lw=1.8, color="black",
                linestyle="--", label=spec.reference_column)
    if spec.circles_column:
        ax.scatter(x, cols[spec.circles_column], facecolors="none",
                   edgecolors="red", s=42, zorder=4, label=spec.circles_column)
    ax.set_xlabel(x_col)
    ax.legend(fontsize=8)


def render(spec: FigureSpec) -> str:
    """Validate the CSV against the panel schema and write the image.

    Returns the output path.  Raises :class:`SchemaError` (naming the
    offending column) before any file is written when the input does not
    match; a failed render leaves no image behind.
    """
    cols = _load_csv(spec.input_csv)
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    try:
        if spec.panel == "scatter":
            _panel_scatter(spec, cols, ax)
        elif spec.panel == "surface":
            _panel_surface(spec, cols, fig, ax)
        else:
            _panel_cross_section(spec, cols, ax)
        if spec.title and spec.panel != "surface":
            ax.set_title(spec.title)
        fig.savefig(spec.output, format="png")
    finally:
        plt.close(fig)
    return spec.output


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="ginfigures-render",
                                 description="Render a figure from a JSON spec")
    ap.add_argument("--spec", required=True, help="path to the FigureSpec JSON")
    args = ap.parse_args(argv)
    try:
        spec = FigureSpec.from_json(args.spec)
        out = render(spec)
    except (SchemaError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
