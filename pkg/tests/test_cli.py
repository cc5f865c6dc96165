import json
import subprocess
import sys


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "spatialmatch.cli", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


class TestBounds:
    def test_single_shot_json_to_stdout(self):
        proc = run_cli("bounds", "--base", "1", "--extra", "1", "--p", "0.5")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["upper"] == 0.75
        assert abs(payload["lower_at_p"] - 11.0 / 15.0) < 1e-12
        assert payload["lower_sup"] <= payload["upper"]

    def test_json_to_file(self, tmp_path):
        out = tmp_path / "bounds.json"
        proc = run_cli("bounds", "--base", "2", "--extra", "0", "--p", "0.3", "--out", str(out))
        assert proc.returncode == 0
        payload = json.loads(out.read_text())
        assert payload["upper"] == 2.0 / 2.5
        assert abs(payload["upper"] - payload["lower_sup"]) < 1e-12


class TestErrorPaths:
    def test_missing_config_exit_2(self):
        proc = run_cli("sweep", "--config", "missing.json", "--out", "x.csv", "--seed", "1")
        assert proc.returncode == 2
        assert "missing.json" in proc.stderr

    def test_unknown_subcommand_exit_2(self):
        proc = run_cli("frobnicate")
        assert proc.returncode == 2

    def test_missing_seed_exit_2(self):
        proc = run_cli("sweep", "--out", "x.csv")
        assert proc.returncode == 2
        assert "seed" in proc.stderr

    def test_unwritable_output_exit_1(self, tmp_path):
        proc = run_cli(
            "counterexample", "--seed", "3", "--n", "20", "--trials", "2",
            "--out", str(tmp_path / "no" / "dir" / "o.csv"),
        )
        assert proc.returncode == 1

    def test_invalid_config_field_named(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"mode": "uniformity", "seed": 5, "trials": 0}))
        proc = run_cli("sweep", "--config", str(cfg), "--out", str(tmp_path / "o.csv"))
        assert proc.returncode == 2
        assert "trials" in proc.stderr


class TestMarkov:
    def test_deterministic_output_bytes(self, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        args = (
            "markov", "--base", "1", "--extra", "0", "--p", "0.3",
            "--steps", "50000", "--seed", "9",
        )
        assert run_cli(*args, "--out", str(out1)).returncode == 0
        assert run_cli(*args, "--out", str(out2)).returncode == 0
        assert out1.read_bytes() == out2.read_bytes()
        payload = json.loads(out1.read_text())
        assert abs(payload["matched_total"] - 2.0 / 3.0) < 0.05


class TestSweepCli:
    def test_sweep_writes_csv(self, tmp_path):
        out = tmp_path / "sweep.csv"
        proc = run_cli(
            "sweep", "--seed", "7", "--n", "40", "--trials", "3",
            "--alpha-points", "2", "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        assert lines[0].startswith("family,k,alpha")
        assert len(lines) == 1 + 3 * 2

    def test_flag_overrides_config_with_notice(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"mode": "uniformity", "seed": 7, "n": 30, "trials": 2}))
        out = tmp_path / "o.csv"
        proc = run_cli(
            "sweep", "--config", str(cfg), "--trials", "3",
            "--alpha-points", "2", "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        assert "overrides" in proc.stdout

    def test_help_documents_schema(self):
        proc = run_cli("sweep", "--help")
        assert proc.returncode == 0
        assert "mean_fraction" in proc.stdout


class TestSingleShots:
    def test_match_reports_sizes(self):
        proc = run_cli(
            "match", "--seed", "5", "--n", "50", "--base", "1", "--extra", "1", "--p", "0.5"
        )
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["matching_size"] == payload["greedy_size"]
        assert 0 <= payload["matching_fraction"] <= 1

    def test_dplus_lists_indices(self):
        proc = run_cli("dplus", "--seed", "6", "--n", "30", "--base", "0.5")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert isinstance(payload["dplus"], list)
        assert all(0 <= j < 30 for j in payload["dplus"])

    def test_decompose(self):
        proc = run_cli("decompose", "--x", "3,1,0", "--y", "2,1,1")
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["num_steps"] == 1
        assert payload["steps"][0] == {"i": 0, "j": 2, "tau": 1.0}

    def test_decompose_rejects_non_majorized(self):
        proc = run_cli("decompose", "--x", "1,1", "--y", "2,0")
        assert proc.returncode == 2
