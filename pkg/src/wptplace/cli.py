"""Command-line front end: solve a room, sweep geometry ratios, dump a
received-power field, or validate the closed form against the solvers.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import closed_form, solver
from .channel import (
    Placement,
    RadioParams,
    ZeroDistance,
    fraunhofer_distance,
    received_power,
)
from .geometry import ReceiverPoint, Room, critical_set

SWEEP_HEADER = ("ry", "rz", "rho", "a1_star_over_lx", "gamma_star_norm", "eta", "regime")
FIELD_HEADER = ("x", "y", "z", "gamma_watts")

_CONFIG_DEFAULTS = {
    "lx": 2.0,
    "ly": 1.0,
    "lz": 1.0,
    "z0": 0.0,
    "power": 1.0,
    "ref_gain": 1.0,
    "wavelength": 0.1,
    "nt": 2,
    "a1": None,
    "out": None,
    "format": None,
    "x_grid_count": None,
    "a_grid_count": None,
    "refine_iters": None,
    "tol": None,
    "max_qt_iters": None,
    "ry_min": 0.005,
    "ry_max": 1.0,
    "ry_count": 400,
    "rz_values": list(solver.REFERENCE_RZ_VALUES),
    "grid": [21, 21, 9],
    "rooms_per_series": 45,
}


class ConfigError(Exception):
    """Missing or invalid configuration value; the message names the field."""


class ValidationFailure(Exception):
    """The numerical solvers disagree with the closed form beyond tolerance."""

    def __init__(self, report: solver.ValidationReport):
        super().__init__("validation failed")
        self.report = report


@dataclass
class RunConfig:
    """Fully merged configuration: defaults, then config file, then flags."""

    lx: float
    ly: float
    lz: float
    z0: float
    power: float
    ref_gain: float
    wavelength: float
    nt: int
    a1: float | None
    out: str | None
    format: str | None
    solver_config: solver.SolverConfig
    ry_min: float
    ry_max: float
    ry_count: int
    rz_values: tuple[float, ...]
    grid: tuple[int, int, int]
    rooms_per_series: int

    def room(self) -> Room:
        try:
            return Room(lx=self.lx, ly=self.ly, lz=self.lz, z0=self.z0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def radio(self) -> RadioParams:
        try:
            return RadioParams(
                wavelength=self.wavelength, ref_gain=self.ref_gain, tx_power=self.power
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    for key in data:
        if key not in _CONFIG_DEFAULTS:
            raise ConfigError(f"unknown config key: {key}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = dict(_CONFIG_DEFAULTS)
    if getattr(args, "config", None):
        merged.update(_load_config_file(args.config))
    flag_names = (
        "lx", "ly", "lz", "z0", "power", "ref_gain", "wavelength", "nt", "a1",
        "out", "format", "ry_min", "ry_max", "ry_count", "rooms_per_series",
    )
    for name in flag_names:
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    if getattr(args, "rz", None):
        merged["rz_values"] = args.rz
    if getattr(args, "grid", None):
        merged["grid"] = args.grid

    def number(key):
        value = merged[key]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        return float(value)

    solver_kwargs = {}
    for key in ("x_grid_count", "a_grid_count", "refine_iters", "max_qt_iters"):
        if merged[key] is not None:
            solver_kwargs[key] = int(merged[key])
    if merged["tol"] is not None:
        solver_kwargs["tol"] = float(merged["tol"])
    try:
        solver_config = solver.SolverConfig(**solver_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    grid = tuple(int(v) for v in merged["grid"])
    if len(grid) != 3 or min(grid) < 2:
        raise ConfigError(f"grid must be three integers >= 2, got {merged['grid']}")

    fmt = merged["format"]
    if fmt not in (None, "csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")

    return RunConfig(
        lx=number("lx"),
        ly=number("ly"),
        lz=number("lz"),
        z0=number("z0"),
        power=number("power"),
        ref_gain=number("ref_gain"),
        wavelength=number("wavelength"),
        nt=int(merged["nt"]),
        a1=None if merged["a1"] is None else float(merged["a1"]),
        out=merged["out"],
        format=fmt,
        solver_config=solver_config,
        ry_min=number("ry_min"),
        ry_max=number("ry_max"),
        ry_count=int(merged["ry_count"]),
        rz_values=tuple(float(v) for v in merged["rz_values"]),
        grid=grid,
        rooms_per_series=int(merged["rooms_per_series"]),
    )


def report_payload(room: Room, params: RadioParams,
                   report: closed_form.SolveReport) -> dict:
    """JSON-ready report with a stable key order."""
    crit = critical_set(room, report.regime)
    placement = Placement((report.a2_star, report.a1_star))
    return {
        "room": {"lx": room.lx, "ly": room.ly, "lz": room.lz, "z0": room.z0},
        "radio": {
            "tx_power": params.tx_power,
            "ref_gain": params.ref_gain,
            "wavelength": params.wavelength,
        },
        "a1_star": report.a1_star,
        "a2_star": report.a2_star,
        "regime": report.regime.value,
        "x_crit": list(report.x_crit),
        "y_crit": crit.y_crit,
        "z_crit": crit.z_crit,
        "gamma_star_watts": report.gamma_star,
        "eta": report.eta,
        "geometry": {
            "ry": report.geometry.ry,
            "rz": report.geometry.rz,
            "rho": report.geometry.rho,
        },
        "near_field": {
            "aperture_m": placement.aperture,
            "fraunhofer_distance_m": fraunhofer_distance(placement, params.wavelength),
        },
        "degenerate_2d": room.is_degenerate,
    }


def _write_text(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    room = cfg.room()
    params = cfg.radio()
    report = closed_form.solve(room, params)
    payload = report_payload(room, params, report)

    if args.validate:
        oracle = solver.oracle_grid_solve(room, 2, cfg.solver_config)
        qt = solver.qt_solve(room, 2, cfg.solver_config)
        a_oracle = max(oracle.positions.xs)
        a_qt = max(qt.positions.xs)
        payload["validation"] = {
            "oracle_a1": a_oracle,
            "oracle_dev": abs(a_oracle - report.a1_star),
            "qt_a1": a_qt,
            "qt_dev": abs(a_qt - report.a1_star),
            "qt_converged": qt.converged,
        }
        print(f"oracle deviation: {abs(a_oracle - report.a1_star):.3e} m")
        print(f"qt deviation:     {abs(a_qt - report.a1_star):.3e} m")

    print(f"regime: {report.regime.value}")
    print(f"a1* = {report.a1_star:.9g} m, a2* = {report.a2_star:.9g} m")
    print(f"worst-case power: {report.gamma_star:.9g} W, gain over co-located: {report.eta:.9g}")

    if cfg.format == "csv":
        header = ("a1_star", "a2_star", "regime", "gamma_star_watts", "eta", "ry", "rz", "rho")
        row = (report.a1_star, report.a2_star, report.regime.value, report.gamma_star,
               report.eta, report.geometry.ry, report.geometry.rz, report.geometry.rho)
        _write_text(cfg.out, _csv_text(header, [row]))
    else:
        _write_text(cfg.out, json.dumps(payload, indent=2) + "\n")
    return 0


def sweep_rows(ry_values, rz_values) -> list[tuple]:
    """Closed-form sweep over shape ratios, sorted by (rz, ry)."""
    rows = []
    for rz in sorted(rz_values):
        for ry in sorted(ry_values):
            rho = 4.0 * ry * ry + rz * rz
            rows.append((
                ry,
                rz,
                rho,
                closed_form.a1_over_lx(rho),
                closed_form.gamma_norm(rho),
                closed_form.gain(rho),
                closed_form.classify_rho(rho).value,
            ))
    return rows


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    if not cfg.ry_min > 0:
        raise ConfigError(f"ry_min must be positive (L_y > 0), got {cfg.ry_min}")
    if cfg.ry_max < cfg.ry_min or cfg.ry_count < 2:
        raise ConfigError("need ry_max >= ry_min and ry_count >= 2")
    ry_values = np.linspace(cfg.ry_min, cfg.ry_max, cfg.ry_count)
    rows = sweep_rows(ry_values, cfg.rz_values)
    if cfg.format == "json":
        payload = [dict(zip(SWEEP_HEADER, row)) for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = _csv_text(SWEEP_HEADER, rows)
    _write_text(cfg.out, text)
    if not cfg.out:
        print(text, end="")
    else:
        print(f"wrote {len(rows)} sweep rows to {cfg.out}")
    return 0


def _field_placement(cfg: RunConfig, room: Room) -> Placement:
    if cfg.a1 is not None:
        if not 0 <= cfg.a1 <= room.lx / 2:
            raise ConfigError(f"a1 must lie in [0, L_x/2], got {cfg.a1}")
        if cfg.nt == 1:
            return Placement((cfg.a1,))
        if cfg.nt == 2:
            return Placement((-cfg.a1, cfg.a1))
        raise ConfigError("a1 only applies to 1 or 2 antennas; omit it for larger arrays")
    if cfg.nt == 1:
        return Placement((0.0,))
    if cfg.nt == 2:
        a1 = closed_form.optimal_a1(room)
        return Placement((-a1, a1))
    return solver.qt_solve(room, cfg.nt, cfg.solver_config).positions


def cmd_field(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    room = cfg.room()
    params = cfg.radio()
    placement = _field_placement(cfg, room)
    nx, ny, nz = cfg.grid
    gx = np.linspace(-room.lx / 2, room.lx / 2, nx)
    gy = np.linspace(0.0, room.ly, ny)
    gz = np.linspace(-room.lz / 2, room.lz / 2, nz)
    rows = []
    worst = None
    skipped = 0
    for x in gx:
        for y in gy:
            for z in gz:
                point = ReceiverPoint(float(x), float(y), float(z))
                try:
                    gamma = received_power(placement, room.z0, point, params)
                except ZeroDistance:
                    skipped += 1  # grid point sits on an antenna
                    continue
                rows.append((point.x, point.y, point.z, gamma))
                if worst is None or gamma < worst[3]:
                    worst = rows[-1]
    text = _csv_text(FIELD_HEADER, rows)
    _write_text(cfg.out, text)
    if not cfg.out:
        print(text, end="")
    print(f"antennas at: {', '.join(f'{v:.6g}' for v in placement.xs)}")
    if skipped:
        print(f"skipped {skipped} grid point(s) coinciding with an antenna")
    print(f"minimum gamma: {worst[3]:.9g} W at (x={worst[0]:.6g}, y={worst[1]:.6g}, z={worst[2]:.6g})")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    rooms = solver.reference_validation_rooms(per_series=cfg.rooms_per_series)
    report = solver.run_validation(rooms, cfg.solver_config)
    print(f"geometries checked: {report.rooms_checked}")
    print(f"max |a1_closed - a1_oracle| / lx: {report.max_a1_gap_oracle:.3e}"
          f" (tol {solver.TOL_A1_ORACLE:g})")
    print(f"max relative objective gap:      {report.max_rel_objective_gap:.3e}"
          f" (tol {solver.TOL_REL_OBJECTIVE:g})")
    print(f"max |a1_qt - a1_oracle| / lx:    {report.max_a1_gap_qt:.3e}"
          f" (tol {solver.TOL_A1_QT:g})")
    print(f"  near-transition band:          {report.max_a1_gap_qt_relaxed:.3e}"
          f" (tol {solver.TOL_A1_QT_RELAXED:g})")
    if not report.passed:
        raise ValidationFailure(report)
    print("PASS")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wptplace",
        description="Optimal transmit-antenna placement for near-field WPT in a cuboid room",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat TOML config file; flags override it")
    common.add_argument("--lx", type=float, help="room width in m")
    common.add_argument("--ly", type=float, help="room depth in m")
    common.add_argument("--lz", type=float, help="room height in m")
    common.add_argument("--z0", type=float, help="antenna-line height in m")
    common.add_argument("--power", type=float, help="total transmit power in W")
    common.add_argument("--ref-gain", dest="ref_gain", type=float,
                        help="channel power gain at 1 m")
    common.add_argument("--wavelength", type=float, help="carrier wavelength in m")
    common.add_argument("--nt", type=int, help="number of transmit antennas")
    common.add_argument("--out", help="output file path")
    common.add_argument("--format", choices=("csv", "json"), help="output format")

    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", parents=[common],
                             help="closed-form optimal placement for one room")
    p_solve.add_argument("--validate", action="store_true",
                         help="also run both numerical solvers and print deviations")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="sweep shape ratios and emit a table")
    p_sweep.add_argument("--ry-min", dest="ry_min", type=float)
    p_sweep.add_argument("--ry-max", dest="ry_max", type=float)
    p_sweep.add_argument("--ry-count", dest="ry_count", type=int)
    p_sweep.add_argument("--rz", type=float, action="append",
                         help="height ratio series; repeatable")
    p_sweep.set_defaults(func=cmd_sweep)

    p_field = sub.add_parser("field", parents=[common],
                             help="received power over a room grid")
    p_field.add_argument("--a1", type=float, help="pair offset; defaults to the closed form")
    p_field.add_argument("--grid", type=lambda s: [int(v) for v in s.split(",")],
                         help="grid as nx,ny,nz")
    p_field.set_defaults(func=cmd_field)

    p_val = sub.add_parser("validate", parents=[common],
                           help="three-way closed-form/oracle/QT comparison sweep")
    p_val.add_argument("--rooms-per-series", dest="rooms_per_series", type=int,
                       help="geometries per reference height ratio")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValidationFailure as exc:
        for line in exc.report.failures:
            print(f"FAIL: {line}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
