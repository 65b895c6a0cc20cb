"""Render static figures from wptplace sweep and field CSV files.

Reads only the CSV schemas the wptplace CLI emits; never imports the solver
package itself. Output is a deterministic PNG: re-rendering the same CSV
produces identical bytes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("placement", "gain", "field-slice")

_VALUE_COLUMN = {"placement": "a1_star_over_lx", "gain": "eta"}
_SAVEFIG_KWARGS = {"dpi": 150, "metadata": {"Software": None}}


class SchemaError(ValueError):
    """CSV is empty or lacks a required column."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input CSV, figure kind, output path, series column."""

    input_csv: str
    kind: str
    output_image: str
    series_column: str = "rz"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def read_rows(path: str, required: tuple[str, ...]) -> list[dict[str, float]]:
    """CSV rows with the required columns parsed as floats."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path} is empty")
        missing = [col for col in required if col not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path} lacks column(s): {', '.join(missing)}")
        rows = [{col: float(row[col]) for col in required} for row in reader]
    if not rows:
        raise SchemaError(f"{path} has a header but no data rows")
    return rows


def load_series(path: str, value_column: str,
                series_column: str = "rz") -> dict[float, list[tuple[float, float]]]:
    """Group (ry, value) points by series key, each series sorted by ry."""
    rows = read_rows(path, ("ry", value_column, series_column))
    series: dict[float, list[tuple[float, float]]] = {}
    for row in rows:
        series.setdefault(row[series_column], []).append((row["ry"], row[value_column]))
    return {key: sorted(points) for key, points in sorted(series.items())}


def _render_sweep(spec: FigureSpec) -> None:
    value_column = _VALUE_COLUMN[spec.kind]
    series = load_series(spec.input_csv, value_column, spec.series_column)

    if spec.kind == "gain":
        for key, points in series.items():
            bad = [v for _, v in points if not 1.0 - 1e-9 <= v <= 3.0 + 1e-9]
            if bad:
                raise ValueError(
                    f"gain values outside [1, 3] in series {key:g}: {bad[:3]}")
    else:
        for key, points in series.items():
            bad = [v for _, v in points if not 0.0 <= v <= 0.5 + 1e-9]
            if bad:
                raise ValueError(
                    f"placement values outside [0, 1/2] in series {key:g}: {bad[:3]}")

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for key, points in series.items():
        ry = [p[0] for p in points]
        values = [p[1] for p in points]
        ax.plot(ry, values, label=f"height ratio = {key:g}", linewidth=1.5)
    ax.set_xlabel("depth ratio  $L_y/L_x$")
    if spec.kind == "placement":
        ax.set_ylabel("optimal offset  $a_1^*$")
        ax.set_ylim(0.0, 0.5)
        ax.set_yticks([0.0, 0.125, 0.25, 0.375, 0.5])
        ax.set_yticklabels(["0", "$L_x/8$", "$L_x/4$", "$3L_x/8$", "$L_x/2$"])
    else:
        ax.set_ylabel("gain over co-located pair")
        ax.set_ylim(0.0, 3.0)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.output_image, **_SAVEFIG_KWARGS)
    plt.close(fig)


def _render_field_slice(spec: FigureSpec) -> None:
    rows = read_rows(spec.input_csv, ("x", "y", "z", "gamma_watts"))
    z_values = sorted({row["z"] for row in rows})
    z_mid = z_values[len(z_values) // 2]
    sliced = [row for row in rows if row["z"] == z_mid]

    xs = sorted({row["x"] for row in sliced})
    ys = sorted({row["y"] for row in sliced})
    lookup = {(row["x"], row["y"]): row["gamma_watts"] for row in sliced}
    grid = [[lookup.get((x, y), float("nan")) for x in xs] for y in ys]

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    mesh = ax.pcolormesh(xs, ys, grid, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="received power (W)")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title(f"received power at z = {z_mid:g} m")
    fig.tight_layout()
    fig.savefig(spec.output_image, **_SAVEFIG_KWARGS)
    plt.close(fig)


def render(spec: FigureSpec) -> str:
    """Draw the requested figure and return the output path."""
    if spec.kind == "field-slice":
        _render_field_slice(spec)
    else:
        _render_sweep(spec)
    return spec.output_image
