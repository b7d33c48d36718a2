import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from betacodec.cli import (
    ExperimentConfig,
    load_config,
    read_bitstream,
    run_boundedness_sweep,
    run_decay_recovery,
    run_poly_family,
    run_transversality_scan,
    run_zero_structure,
    write_bitstream,
    write_rows,
)
from betacodec.errors import ConfigError


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "betacodec", *args],
                          capture_output=True, text=True, cwd=cwd)


class TestConfig:
    def test_load_minimal(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"kind": "decay-recovery", "trials": 3}')
        cfg = load_config(p)
        assert cfg.kind == "decay-recovery"
        assert cfg.trials == 3
        assert cfg.bit_lengths == (8, 16, 24, 32, 40)

    def test_unknown_key(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"kind": "decay-recovery", "bogus": 1}')
        with pytest.raises(ConfigError, match="bogus"):
            load_config(p)

    def test_missing_kind(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{}")
        with pytest.raises(ConfigError, match="kind"):
            load_config(p)

    def test_json_error_is_line_anchored(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{\n"kind": "decay-recovery",\n!bad\n}')
        with pytest.raises(ConfigError, match="line 3"):
            load_config(p)

    def test_bad_values(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"kind": "decay-recovery", "trials": 0}')
        with pytest.raises(ConfigError, match="trials"):
            load_config(p)
        p.write_text('{"kind": "nope"}')
        with pytest.raises(ConfigError, match="kind"):
            load_config(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")


class TestBitstreamIO:
    def test_round_trip(self, tmp_path):
        p = tmp_path / "s.bits"
        bits = np.array([1, -1, -1, 1], dtype=np.int8)
        write_bitstream(p, bits)
        assert p.read_text() == "+--+\n"
        assert np.array_equal(read_bitstream(p), bits)

    def test_rejects_garbage(self, tmp_path):
        p = tmp_path / "s.bits"
        p.write_text("+-x\n")
        with pytest.raises(ConfigError):
            read_bitstream(p)


class TestRunners:
    def test_poly_family_zero_degree_is_constant(self):
        cfg = ExperimentConfig(kind="poly-family", trials=2, bit_lengths=(0, 8),
                               gamma=0.64375, alpha_range=(2.0, 2.0), nu=0.3,
                               seed=5, curve_points=50)
        rows = run_poly_family(cfg)
        const = [r for r in rows if r["n_bits"] == 0]
        assert const
        by_pair = {}
        for r in const:
            by_pair.setdefault(r["pair_id"], set()).add(r["value"])
        for values in by_pair.values():
            assert len(values) == 1
            assert values.pop() in (-1.0, 1.0)

    def test_poly_family_curves_cross_near_base(self):
        cfg = ExperimentConfig(kind="poly-family", trials=3, bit_lengths=(32,),
                               gamma=0.64375, alpha_range=(2.0, 2.0), nu=0.3,
                               seed=1, curve_points=2001)
        rows = run_poly_family(cfg)
        for pair in {r["pair_id"] for r in rows}:
            pts = [(r["t"], r["value"]) for r in rows if r["pair_id"] == pair]
            pts.sort()
            ts = np.array([t for t, _ in pts])
            vs = np.array([v for _, v in pts])
            sign_change = np.nonzero((vs[1:] < 0) != (vs[:-1] < 0))[0]
            assert len(sign_change) > 0
            first = ts[sign_change[0]]
            assert abs(first - 0.64375) < 2e-3

    def test_zero_structure_rows(self):
        cfg = ExperimentConfig(kind="zero-structure", n_streams=3, stream_bits=60,
                               alpha_range=(2.0, 2.0), nu=0.3, seed=0)
        rows = run_zero_structure(cfg)
        assert len(rows) == 3
        for r in rows:
            assert r["period3"] and r["factored"]
            assert r["derivative_at_root"] >= 1.545
            assert r["min_margin"] >= 0.0

    def test_transversality_scan_row(self):
        cfg = ExperimentConfig(kind="transversality-scan", max_degree=4)
        (row,) = run_transversality_scan(cfg)
        assert row["total_instances"] == 2 * 3 ** 4
        assert row["n_violations"] == 0

    def test_boundedness_sweep_small(self):
        cfg = ExperimentConfig(kind="boundedness-sweep", nu=0.3, epsilon=0.3,
                               leak_grid=3, alpha_grid=3, orbit_steps=800, seed=2)
        rows = run_boundedness_sweep(cfg)
        assert len(rows) == 3 * 3 * 3 * 4 * 5
        assert all(r["bounded"] for r in rows)

    def test_decay_counts_no_signal_failures(self):
        # an ideal quantizer forces antisymmetric pairs: every trial redraws
        # to exhaustion and lands in the failures column
        cfg = ExperimentConfig(kind="decay-recovery", trials=2, bit_lengths=(8,),
                               nu=0.0, seed=0, max_redraws=2)
        summary, details = run_decay_recovery(cfg)
        assert summary[0]["failures"] == 2
        assert details == []

    def test_decay_all_policies(self):
        for policy in ("always-minus", "always-plus", "toggle", "seeded-random"):
            cfg = ExperimentConfig(kind="decay-recovery", trials=3,
                                   bit_lengths=(16,), policy=policy, seed=1)
            summary, details = run_decay_recovery(cfg)
            assert summary[0]["failures"] == 0
            assert len(details) == 3

    def test_write_rows_formats(self, tmp_path):
        rows = [{"a": 1, "b": 0.5, "c": True}]
        text = write_rows(tmp_path / "r.csv", rows, "csv")
        assert text == "a,b,c\n1,0.5,true\n"
        text = write_rows(tmp_path / "r.json", rows, "json")
        assert json.loads(text) == [{"a": 1, "b": 0.5, "c": True}]


class TestCommandLine:
    def test_encode_recover_round_trip(self, tmp_path):
        common = ["--lambda1", "0.95", "--lambda2", "0.95", "--nu", "0.3",
                  "--alpha", "2", "--n-bits", "40", "--policy", "seeded-random",
                  "--seed", "11"]
        r1 = run_cli("encode", "--kind", "gre-leaky", "--x", "0.4",
                     *common, "--out", str(tmp_path / "b"))
        r2 = run_cli("encode", "--kind", "gre-leaky", "--x", "-0.4",
                     *common, "--out", str(tmp_path / "c"))
        assert r1.returncode == 0 and r2.returncode == 0
        meta = json.loads((tmp_path / "b.meta.json").read_text())
        assert "gamma" not in meta and "effective_gamma" not in meta
        rec = run_cli("recover", "--pair", str(tmp_path / "b.bits"),
                      str(tmp_path / "c.bits"), "--gamma-high", "0.6491",
                      "--format", "json")
        assert rec.returncode == 0
        payload = json.loads(rec.stdout)
        assert abs(payload["gamma_estimate"] - 0.650562) < 1e-3

    def test_verify_range_output(self):
        r = run_cli("verify-range", "--delta", "0.3")
        assert r.returncode == 0
        assert r.stdout.strip() == "[1.5574, 1.9954]"

    def test_decode(self, tmp_path):
        run_cli("encode", "--kind", "gre", "--x", "0.7", "--n-bits", "20",
                "--nu", "0", "--out", str(tmp_path / "s"))
        r = run_cli("decode", "--bits", str(tmp_path / "s.bits"),
                    "--gamma", "0.6180339887498949", "--format", "json")
        assert r.returncode == 0
        payload = json.loads(r.stdout)
        assert abs(payload["estimate"] - 0.7) < 1.1e-4

    def test_exit_code_2_on_bad_config(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        r = run_cli("experiment", "--config", str(p))
        assert r.returncode == 2
        assert "line" in r.stderr

    def test_exit_code_2_on_bad_parameter(self, tmp_path):
        (tmp_path / "s.bits").write_text("+-+\n")
        r = run_cli("decode", "--bits", str(tmp_path / "s.bits"), "--gamma", "1.5")
        assert r.returncode == 2

    def test_exit_code_3_on_numerical_failure(self, tmp_path):
        # a stream that encodes a nonzero sample has no root in the window
        run_cli("encode", "--kind", "gre-leaky", "--x", "0.4", "--lambda1",
                "0.95", "--lambda2", "0.95", "--nu", "0.3", "--alpha", "2",
                "--n-bits", "40", "--seed", "11", "--out", str(tmp_path / "b"))
        r = run_cli("recover", "--zero", str(tmp_path / "b.bits"),
                    "--gamma-high", "0.63")
        assert r.returncode == 3

    def test_experiment_stdout(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"kind": "decay-recovery", "trials": 2,
                                 "bit_lengths": [8], "seed": 4}))
        r = run_cli("experiment", "--config", str(p))
        assert r.returncode == 0
        assert r.stdout.startswith("n_bits,worst_gamma_error")
