"""CLI behavior: exit codes, determinism, golden outputs per command."""

import csv
import json
from pathlib import Path

from plcodes import cli
from plcodes.tail_bounds import kwise_tail_bound, reliability_threshold_k

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBuild:
    def test_audit_passes_at_reference_parameters(self, capsys, tmp_path):
        out_file = tmp_path / "code.plc"
        code, out, _ = run(capsys, "build", "--n", "24", "--Rn", "6", "--k", "4",
                           "--seed", "7", "--out", str(out_file))
        assert code == 0
        audit = json.loads(out)
        assert audit["m"] == 24 and audit["design_distance"] == "pass"
        assert out_file.exists()

    def test_same_seed_same_file(self, capsys, tmp_path):
        a, b = tmp_path / "a.plc", tmp_path / "b.plc"
        run(capsys, "build", "--n", "12", "--Rn", "4", "--k", "2",
            "--seed", "5", "--out", str(a))
        run(capsys, "build", "--n", "12", "--Rn", "4", "--k", "2",
            "--seed", "5", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_rn_above_n_is_a_usage_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "build", "--n", "4", "--Rn", "6", "--k", "2",
                           "--seed", "1", "--out", str(tmp_path / "x.plc"))
        assert code == 2 and "error" in err

    def test_golden_code_file(self, capsys, tmp_path):
        out_file = tmp_path / "golden.plc"
        run(capsys, "build", "--n", "6", "--Rn", "3", "--k", "2",
            "--seed", "1", "--out", str(out_file))
        assert out_file.read_text() == (GOLDEN / "build_code.plc").read_text()


class TestSimulate:
    def test_zero_budget_estimate_zero(self, capsys):
        code, out, _ = run(capsys, "simulate", "--n", "8", "--Rn", "3", "--k", "2",
                           "--p", "0.1", "--r", "0.25", "--strategy", "oblivious",
                           "--trials", "30", "--seed", "2")
        assert code == 0
        assert json.loads(out)["estimate"] == 0.0

    def test_reproducible_given_seed(self, capsys):
        argv = ["simulate", "--n", "8", "--Rn", "3", "--k", "2", "--p", "0.25",
                "--r", "0.25", "--strategy", "myopic", "--pool-size", "64",
                "--trials", "40", "--seed", "9"]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_matches_library_call(self, capsys):
        import plcodes as pl
        _, out, _ = run(capsys, "simulate", "--n", "8", "--Rn", "3", "--k", "2",
                        "--p", "0.25", "--r", "0.25", "--strategy", "oblivious",
                        "--trials", "50", "--seed", "4")
        code = pl.sample_code(8, 3, 2, seed=4)
        params = pl.ChannelParams(p=0.25, r=0.25, n=8)
        rep = pl.estimate_error_probability(
            code, params, pl.ObliviousRandom(code, params), trials=50, seed=4)
        assert json.loads(out)["estimate"] == rep.estimate

    def test_trace_written_and_budget_respected(self, capsys, tmp_path):
        trace = tmp_path / "trials.jsonl"
        code, out, _ = run(capsys, "simulate", "--n", "8", "--Rn", "3", "--k", "2",
                           "--p", "0.25", "--r", "0.25", "--strategy", "oblivious",
                           "--trials", "25", "--seed", "3", "--trace", str(trace))
        assert code == 0
        lines = [json.loads(ln) for ln in trace.read_text().splitlines()]
        assert len(lines) == 25
        assert all(rec["error_weight"] <= 2 for rec in lines)

    def test_code_file_roundtrip(self, capsys, tmp_path):
        code_file = tmp_path / "c.plc"
        run(capsys, "build", "--n", "8", "--Rn", "3", "--k", "2",
            "--seed", "4", "--out", str(code_file))
        rc, out, _ = run(capsys, "simulate", "--code", str(code_file),
                         "--p", "0.25", "--r", "0.25", "--strategy", "oblivious",
                         "--trials", "50", "--seed", "4")
        assert rc == 0
        inline = run(capsys, "simulate", "--n", "8", "--Rn", "3", "--k", "2",
                     "--p", "0.25", "--r", "0.25", "--strategy", "oblivious",
                     "--trials", "50", "--seed", "4")[1]
        assert json.loads(out)["estimate"] == json.loads(inline)["estimate"]

    def test_missing_code_parameters_usage_error(self, capsys):
        rc, _, err = run(capsys, "simulate", "--p", "0.1", "--r", "0.2",
                         "--trials", "10", "--seed", "1")
        assert rc == 2

    def test_code_seed_separates_code_from_trials(self, capsys):
        base = ["simulate", "--n", "8", "--Rn", "3", "--k", "2", "--p", "0.25",
                "--r", "0.25", "--strategy", "oblivious", "--trials", "40",
                "--seed", "5"]
        _, same_code, _ = run(capsys, *base, "--code-seed", "5")
        _, default, _ = run(capsys, *base)
        assert json.loads(same_code) == json.loads(default)
        rc, other, _ = run(capsys, *base, "--code-seed", "99")
        assert rc == 0  # different code, same trial stream: still runs
        assert json.loads(other)["trials"] == 40

    def test_exhaustive_strategy_on_a_tiny_instance(self, capsys):
        rc, out, _ = run(capsys, "simulate", "--n", "4", "--Rn", "4", "--k", "2",
                         "--p", "0.26", "--r", "0.25", "--strategy", "exhaustive",
                         "--trials", "60", "--seed", "2")
        assert rc == 0
        payload = json.loads(out)
        assert payload["strategy"] == "exhaustive-worst-case"
        assert payload["estimate"] > 0  # dense code, the scan always finds blood

    def test_golden_summary(self, capsys):
        _, out, _ = run(capsys, "simulate", "--n", "8", "--Rn", "3", "--k", "2",
                        "--p", "0.25", "--r", "0.25", "--strategy", "oblivious",
                        "--trials", "20", "--seed", "6")
        assert out == (GOLDEN / "simulate_summary.json").read_text()


class TestVerify:
    def test_passing_suite_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "ioef-xor", "--seed", "0")
        assert code == 0
        assert "PASS" in out and "FAIL " not in out

    def test_unknown_suite_lists_available(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "nope")
        assert code == 2
        assert "ioef-xor" in err and "moment-chain" in err

    def test_failing_assertion_exits_one(self, capsys, monkeypatch):
        from plcodes import verify_suites

        def always_fails(seed):
            return [verify_suites.AssertionRecord("forced failure", False, {})]

        monkeypatch.setitem(verify_suites.SUITES, "forced", always_fails)
        code, out, _ = run(capsys, "verify", "--suite", "forced")
        assert code == 1 and "FAIL forced failure" in out

    def test_records_file_schema(self, capsys, tmp_path):
        out_path = tmp_path / "records.jsonl"
        run(capsys, "verify", "--suite", "cycle-partition", "--out", str(out_path))
        lines = [json.loads(ln) for ln in out_path.read_text().splitlines()]
        assert lines[-1]["schema"] == "plcodes.verify-summary/1"
        assert all(ln["schema"] == "plcodes.verify/1" for ln in lines[:-1])
        assert all(ln["pass"] for ln in lines[:-1])

    def test_golden_records(self, capsys, tmp_path):
        out_path = tmp_path / "ball.jsonl"
        run(capsys, "verify", "--suite", "ball-volume", "--seed", "0",
            "--out", str(out_path))
        assert out_path.read_text() == (GOLDEN / "verify_ball_volume.jsonl").read_text()


class TestBounds:
    def test_spot_value_equals_library_call(self, capsys):
        _, out, _ = run(capsys, "bounds", "--k-list", "2", "--n-list", "16",
                        "--gamma-list", "1", "--M", "8", "--mu", "2")
        rows = list(csv.DictReader(out.splitlines()))
        kwise = [r for r in rows if r["family"] == "kwise-tail"][0]
        assert float(kwise["value"]) == kwise_tail_bound(8, 2, 2.0, 1.0)

    def test_gamma_monotonicity_in_table(self, capsys):
        _, out, _ = run(capsys, "bounds", "--k-list", "2", "--n-list", "16",
                        "--gamma-list", "0.5,1,2,4")
        rows = [r for r in csv.DictReader(out.splitlines())
                if r["family"] == "kwise-tail"]
        values = [float(r["value"]) for r in rows]
        assert values == sorted(values, reverse=True)

    def test_exponent_sign_flips_at_threshold(self, capsys):
        p, r, eps = 0.1, 0.2, 0.05
        k_star = reliability_threshold_k(p, r, eps)
        _, out, _ = run(capsys, "bounds", "--p", str(p), "--r", str(r),
                        "--eps", str(eps), "--n-list", "32",
                        "--k-list", f"{k_star - 2},{k_star},{k_star + 2}",
                        "--gamma-list", "1")
        rows = [r_ for r_ in csv.DictReader(out.splitlines())
                if r_["family"] == "code-failure"]
        expo = {int(r_["k"]): float(r_["exponent"]) for r_ in rows}
        assert expo[k_star - 2] >= 0 > expo[k_star]
        threshold_rows = [r_ for r_ in csv.DictReader(out.splitlines())
                          if r_["family"] == "threshold-k"]
        assert int(threshold_rows[0]["value"]) == k_star

    def test_golden_csv(self, capsys, tmp_path):
        out_path = tmp_path / "bounds.csv"
        run(capsys, "bounds", "--k-list", "2,4", "--n-list", "16",
            "--gamma-list", "0.5,1", "--out", str(out_path))
        assert out_path.read_text() == (GOLDEN / "bounds_small.csv").read_text()


class TestConfigFile:
    def test_config_supplies_defaults_and_flags_override(self, capsys, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"n": 8, "Rn": 3, "k": 2, "p": 0.25,
                                      "r": 0.25, "strategy": "oblivious",
                                      "trials": 30, "seed": 11}))
        rc, out, _ = run(capsys, "--config", str(config), "simulate")
        assert rc == 0
        base = json.loads(out)
        assert base["trials"] == 30 and base["seed"] == 11
        rc, out, _ = run(capsys, "--config", str(config), "simulate",
                         "--trials", "12")
        assert rc == 0
        assert json.loads(out)["trials"] == 12
