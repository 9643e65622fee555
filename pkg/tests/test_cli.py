import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from delaylab import cli
from delaylab.dmc import LN2

CHANNELS = Path(__file__).resolve().parent.parent / "channels"


def run(argv):
    return cli.main([str(a) for a in argv])


class TestChannelParsing:
    def test_decimal_strings_accepted(self):
        ch, k = cli.load_channel(str(CHANNELS / "bsc002.json"))
        assert ch.rows[0, 0] == 0.98
        assert k is None

    def test_fortification_period(self):
        ch, k = cli.load_channel(str(CHANNELS / "bsc002_fortified50.json"))
        assert k == 50

    def test_declared_partition_verified(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "name": "x",
            "matrix": [[0.6, 0.0, 0.4], [0.0, 0.6, 0.4]],
            "partition": [[0, 2], [1]],
        }))
        with pytest.raises(cli.CliError) as err:
            cli.load_channel(str(bad))
        assert err.value.code == cli.EXIT_PARSE

    def test_invalid_matrix_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"matrix": [[0.7, 0.2], [0.5, 0.5]]}))
        assert run(["bounds", bad, "--rate", "0.1", "--bounds", "esp"]) == 2
        assert "delaylab" in capsys.readouterr().err


class TestBounds:
    def test_table_values(self, capsys):
        assert run(["bounds", CHANNELS / "bec04.json", "--rate", "0.5",
                    "--bits", "--bounds", "esp,focusing"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "bound,rate_nats,rate_bits,value_nats,value_bits"
        esp = lines[1].split(",")
        assert float(esp[3]) == pytest.approx(0.020410997260, abs=1e-9)
        foc = lines[2].split(",")
        assert float(foc[3]) == pytest.approx(math.log(1.5), abs=1e-9)

    def test_unknown_bound_exit4(self, capsys):
        assert run(["bounds", CHANNELS / "bec04.json", "--rate", "0.1",
                    "--bounds", "esp,nonsense"]) == 4

    def test_infeasible_rate_exit3(self, capsys):
        assert run(["bounds", CHANNELS / "bsc002.json", "--rate", "0.99",
                    "--bounds", "burnashev"]) == 3


class TestCurve:
    def test_csv_round_trip_and_units(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        assert run(["curve", CHANNELS / "bsc002.json", "--bounds", "esp,er",
                    "--rate-grid", "0.05:0.55:11", "--out", out]) == 0
        rows = list(csv.DictReader(open(out)))
        assert len(rows) == 11
        for row in rows:
            # unit discipline to 1e-12 and bit-exact float round trip
            assert abs(float(row["rate_bits"]) * LN2 - float(row["rate_nats"])) <= 1e-12
            assert repr(float(row["esp"])) == row["esp"]

    def test_inf_token(self, tmp_path):
        ch = tmp_path / "identity.json"
        ch.write_text(json.dumps({"matrix": [[1.0, 0.0], [0.0, 1.0]]}))
        out = tmp_path / "c.csv"
        assert run(["curve", ch, "--bounds", "esp", "--rate-grid", "0.2:0.2:1",
                    "--out", out]) == 0
        rows = list(csv.DictReader(open(out)))
        assert len(rows) == 1
        assert rows[0]["esp"] == "inf"
        assert math.isinf(float(rows[0]["esp"]))

    def test_json_format(self, tmp_path):
        out = tmp_path / "c.json"
        assert run(["curve", CHANNELS / "bec04.json", "--bounds", "focusing",
                    "--rate-grid", "0.1:0.4:4", "--out", out,
                    "--format", "json"]) == 0
        payload = json.loads(out.read_text())
        assert len(payload["rate_nats"]) == 4


class TestSim:
    def test_bec_determinism(self, tmp_path):
        cfg = tmp_path / "f.json"
        cfg.write_text(json.dumps({"scheme": "fifo", "beta": 0.4,
                                   "rate_bits": 0.5, "horizon": 100_000,
                                   "d_grid": [8, 12, 16]}))
        for d in ("a", "b"):
            assert run(["sim", "bec", cfg, "--seed", "7",
                        "--out", tmp_path / d]) == 0
        assert (tmp_path / "a/summary.json").read_bytes() == \
               (tmp_path / "b/summary.json").read_bytes()
        assert (tmp_path / "a/trace.csv").read_bytes() == \
               (tmp_path / "b/trace.csv").read_bytes()

    def test_env_seed_override(self, tmp_path, monkeypatch):
        cfg = tmp_path / "f.json"
        cfg.write_text(json.dumps({"scheme": "fifo", "beta": 0.4,
                                   "rate_bits": 0.5, "horizon": 50_000}))
        monkeypatch.setenv("FDL_SEED", "123")
        assert run(["sim", "bec", cfg, "--seed", "7", "--out", tmp_path / "s"]) == 0
        assert json.loads((tmp_path / "s/summary.json").read_text())["seed"] == 123

    def test_threads_do_not_change_summary(self, tmp_path, monkeypatch):
        cfg = tmp_path / "f.json"
        cfg.write_text(json.dumps({"scheme": "fifo", "beta": 0.4,
                                   "rate_bits": 0.5, "horizon": 50_000,
                                   "trials": 4, "d_grid": [8, 12]}))
        monkeypatch.setenv("FDL_THREADS", "4")
        run(["sim", "bec", cfg, "--seed", "3", "--out", tmp_path / "mt"])
        monkeypatch.setenv("FDL_THREADS", "1")
        run(["sim", "bec", cfg, "--seed", "3", "--out", tmp_path / "st"])
        assert (tmp_path / "mt/summary.json").read_bytes() == \
               (tmp_path / "st/summary.json").read_bytes()

    def test_queue_summary_respects_bound(self, tmp_path):
        cfg = tmp_path / "q.json"
        cfg.write_text(json.dumps({
            "service": {"kind": "offset_geometric", "offset": 2, "beta": 0.25},
            "arrival_period": 5, "horizon": 400_000,
            "d_grid": [6, 9, 12, 15, 18]}))
        assert run(["sim", "queue", cfg, "--out", tmp_path / "q"]) == 0
        s = json.loads((tmp_path / "q/summary.json").read_text())
        assert s["fit"]["exponent"] >= s["tail_exponent_bound"] * 0.85

    def test_ncl_exact_tiny_zero_errors(self, tmp_path):
        cfg = tmp_path / "n.json"
        cfg.write_text(json.dumps({
            "mode": "exact_tiny",
            "channel": {"matrix": [[0.98, 0.02], [0.02, 0.98]]},
            "rate": math.log(8) / 12, "rho": 1.0, "k": 3,
            "n": 2, "c": 2, "l": 1, "n_messages": 8,
            "horizon_blocks": 3000}))
        assert run(["sim", "ncl", cfg, "--out", tmp_path / "n"]) == 0
        s = json.loads((tmp_path / "n/summary.json").read_text())
        assert s["committed_errors"] == 0

    def test_bad_config_exit2(self, tmp_path):
        cfg = tmp_path / "broken.json"
        cfg.write_text("{not json")
        assert run(["sim", "bec", cfg, "--out", tmp_path / "x"]) == 2
        cfg2 = tmp_path / "missing.json"
        cfg2.write_text(json.dumps({"scheme": "fifo", "beta": 0.4}))
        assert run(["sim", "bec", cfg2, "--out", tmp_path / "y"]) == 2


class TestFigures:
    def test_unknown_figure_exit4(self, tmp_path):
        assert run(["figure", "99", "--out-dir", tmp_path]) == 4

    def test_figure_4_shows_strict_gap(self, tmp_path):
        assert run(["figure", "4", "--out-dir", tmp_path]) == 0
        rows = list(csv.DictReader(open(tmp_path / "zchannel_bounds.csv")))
        gaps = [float(r["haroutunian"]) - float(r["esp"]) for r in rows]
        assert max(gaps) >= 1e-3
        manifest = json.loads((tmp_path / "MANIFEST.json").read_text())
        assert manifest["figure"] == 4

    def test_figure_6_curve_family(self, tmp_path):
        assert run(["figure", "6", "--out-dir", tmp_path]) == 0
        rows = list(csv.DictReader(open(tmp_path / "bsc002_focusing_family.csv")))
        for row in rows:
            env = min(float(row[f"envelope_lambda_{l:g}"]) for l in (0.125, 0.5, 0.875))
            assert env >= float(row["focusing"]) - 1e-9  # envelope property
