import csv
import json
import math

import pytest

from wptplace.cli import (
    SWEEP_HEADER,
    ConfigError,
    build_config,
    build_parser,
    main,
    sweep_rows,
)

SPOT_ARGS = ["--lx", "2", "--ly", str(math.sqrt(2.0)), "--lz", "0", "--z0", "0"]


def run_cli(argv):
    return main(argv)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestSolve:
    def test_report_values(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert run_cli(["solve", *SPOT_ARGS, "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["a1_star"] == pytest.approx(0.6812500386332131, rel=1e-12)
        assert payload["a2_star"] == -payload["a1_star"]
        assert payload["regime"] == "BoundaryDAS"
        assert payload["gamma_star_watts"] == pytest.approx(0.6830127018922193, rel=1e-12)
        assert payload["eta"] == pytest.approx(1.024519052838329, rel=1e-12)
        assert "fraunhofer_distance_m" in payload["near_field"]
        assert payload["degenerate_2d"] is True
        assert "BoundaryDAS" in capsys.readouterr().out

    def test_colocated_room(self, tmp_path):
        out = tmp_path / "report.json"
        assert run_cli(["solve", "--lx", "2", "--ly", "2", "--lz", "1",
                        "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["a1_star"] == 0.0
        assert payload["eta"] == 1.0
        assert payload["regime"] == "Colocated"

    def test_round_trip_bit_for_bit(self, tmp_path):
        out = tmp_path / "report.json"
        run_cli(["solve", *SPOT_ARGS, "--out", str(out)])
        first = out.read_bytes()
        payload = json.loads(first)
        assert json.dumps(payload, indent=2) + "\n" == first.decode()
        run_cli(["solve", *SPOT_ARGS, "--out", str(out)])
        assert out.read_bytes() == first

    def test_validate_flag_reports_deviations(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert run_cli(["solve", *SPOT_ARGS, "--validate", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["validation"]["oracle_dev"] < 1e-4 * 2
        assert payload["validation"]["qt_dev"] < 1e-3 * 2
        assert "oracle deviation" in capsys.readouterr().out

    def test_csv_format(self, tmp_path):
        out = tmp_path / "report.csv"
        assert run_cli(["solve", *SPOT_ARGS, "--format", "csv", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows[0][:3] == ["a1_star", "a2_star", "regime"]
        assert len(rows) == 2
        assert float(rows[1][0]) == pytest.approx(0.6812500386332131, rel=1e-12)

    def test_invalid_lx_is_config_error(self, capsys):
        assert run_cli(["solve", "--lx", "-1", "--ly", "1", "--lz", "1"]) == 2
        assert "L_x" in capsys.readouterr().err


class TestSweep:
    def test_schema_and_sorting(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert run_cli(["sweep", "--ry-min", "0.05", "--ry-max", "1.0",
                        "--ry-count", "39", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert tuple(rows[0]) == SWEEP_HEADER
        body = rows[1:]
        assert len(body) == 39 * 5
        assert all(len(row) == len(SWEEP_HEADER) for row in body)
        keys = [(float(r[1]), float(r[0])) for r in body]
        assert keys == sorted(keys)
        for row in body:
            assert 0.0 <= float(row[3]) <= 0.5
            assert 1.0 - 1e-12 <= float(row[5]) <= 3.0 + 1e-12

    def test_zero_crossing_of_flat_series(self, tmp_path):
        out = tmp_path / "sweep.csv"
        step = 0.002
        count = int(round((1.0 - step) / step)) + 1
        assert run_cli(["sweep", "--ry-min", str(step), "--ry-max", "1.0",
                        "--ry-count", str(count), "--rz", "0", "--out", str(out)]) == 0
        body = read_csv(out)[1:]
        zero_at = next(float(r[0]) for r in body if float(r[3]) == 0.0)
        assert zero_at == pytest.approx(math.sqrt(3.0) / 2.0, abs=step)

    def test_json_format_round_trips(self, tmp_path):
        out = tmp_path / "sweep.json"
        assert run_cli(["sweep", "--ry-min", "0.1", "--ry-max", "0.9",
                        "--ry-count", "5", "--rz", "0", "--rz", "0.5",
                        "--format", "json", "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert len(payload) == 10
        assert list(payload[0].keys()) == list(SWEEP_HEADER)
        recomputed = sweep_rows([row["ry"] for row in payload[:5]], [0.0, 0.5])
        assert payload[3]["a1_star_over_lx"] == recomputed[3][3]

    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--ry-min", "0.1", "--ry-max", "1.0", "--ry-count", "25"]
        run_cli([*args, "--out", str(a)])
        run_cli([*args, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_zero_ry_min(self, capsys):
        assert run_cli(["sweep", "--ry-min", "0"]) == 2
        assert "ry_min" in capsys.readouterr().err


class TestField:
    def test_minimum_at_far_corner_for_colocated(self, tmp_path, capsys):
        out = tmp_path / "field.csv"
        assert run_cli(["field", "--lx", "2", "--ly", "2.5", "--lz", "1",
                        "--a1", "0", "--grid", "3,3,3", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert tuple(rows[0]) == ("x", "y", "z", "gamma_watts")
        body = [[float(v) for v in row] for row in rows[1:]]
        worst = min(body, key=lambda r: r[3])
        assert abs(worst[0]) == 1.0
        assert worst[1] == 2.5
        assert "minimum gamma" in capsys.readouterr().out

    def test_three_point_room_minimum_tied_centre_and_walls(self, tmp_path):
        out = tmp_path / "field.csv"
        # rho < 5/4: at the optimum the three critical columns tie
        assert run_cli(["field", "--lx", "2", "--ly", "0.4", "--lz", "0",
                        "--grid", "41,13,2", "--out", str(out)]) == 0
        body = [[float(v) for v in row] for row in read_csv(out)[1:]]
        far_wall = {r[0]: r[3] for r in body if r[1] == 0.4}
        assert far_wall[0.0] == pytest.approx(far_wall[1.0], rel=1e-9)
        assert far_wall[0.0] == pytest.approx(far_wall[-1.0], rel=1e-9)
        assert min(far_wall.values()) == pytest.approx(far_wall[0.0], rel=1e-6)

    def test_power_scaling(self, tmp_path):
        args = ["field", "--lx", "2", "--ly", "1", "--lz", "0", "--grid", "5,5,2"]
        one, two = tmp_path / "p1.csv", tmp_path / "p2.csv"
        run_cli([*args, "--power", "1", "--out", str(one)])
        run_cli([*args, "--power", "2", "--out", str(two)])
        for row1, row2 in zip(read_csv(one)[1:], read_csv(two)[1:]):
            assert float(row2[3]) == pytest.approx(2 * float(row1[3]), rel=1e-12)

    def test_unwritable_path_is_io_error(self, tmp_path, capsys):
        assert run_cli(["field", "--grid", "2,2,2",
                        "--out", str(tmp_path / "nope" / "f.csv")]) == 2
        assert "io error" in capsys.readouterr().err


class TestValidate:
    def test_quick_pass(self, capsys):
        assert run_cli(["validate", "--rooms-per-series", "3"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out
        assert "geometries checked" in out


class TestConfigFile:
    def test_file_then_flag_precedence(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text('lx = 4.0\nly = 1.0\nlz = 0.5\npower = 3.0\n')
        parser = build_parser()
        args = parser.parse_args(["solve", "--config", str(cfg), "--power", "5.0"])
        merged = build_config(args)
        assert merged.lx == 4.0
        assert merged.power == 5.0  # flag wins over file

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text("banana = 1\n")
        parser = build_parser()
        args = parser.parse_args(["solve", "--config", str(cfg)])
        with pytest.raises(ConfigError, match="banana"):
            build_config(args)

    def test_solver_overrides_via_file(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text("a_grid_count = 51\ntol = 1e-9\n")
        parser = build_parser()
        args = parser.parse_args(["solve", "--config", str(cfg)])
        merged = build_config(args)
        assert merged.solver_config.a_grid_count == 51
        assert merged.solver_config.tol == 1e-9

    def test_missing_file(self, capsys):
        assert run_cli(["solve", "--config", "/does/not/exist.toml"]) == 2
        assert "config" in capsys.readouterr().err
