import json

import pandas as pd
import pytest
from click.testing import CliRunner
from openpyxl import load_workbook

from cli import main


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def write_degrees(path, values):
    path.write_text("\n".join(str(v) for v in values) + "\n")
    return str(path)


class TestGenerate:
    def test_writes_files(self, runner, tmp_path):
        degrees, edges = tmp_path / "d.txt", tmp_path / "e.csv"
        result = runner.invoke(main, ["generate", "--model", "B", "--n", "300", "--seed", "4",
                                      "--degrees", str(degrees), "--edges", str(edges)])
        assert result.exit_code == 0, result.output
        assert sum(int(line) for line in degrees.read_text().split()) == 600
        assert len(pd.read_csv(edges)) == 300
        assert json.loads(result.output)["n"] == 300

    def test_bad_delta(self, runner):
        result = runner.invoke(main, ["generate", "--n", "10", "--delta", "-1"])
        assert result.exit_code == 2


class TestEstimate:
    def test_hill(self, runner, tmp_path):
        path = write_degrees(tmp_path / "d.txt", [8, 4, 2])
        result = runner.invoke(main, ["estimate", path, "--method", "hill", "--k", "2"])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["alpha_hat"] == pytest.approx(0.9618, abs=1e-4)

    def test_mindist_with_curve(self, runner, tmp_path):
        path = write_degrees(tmp_path / "d.txt", [round(10_000 / i) for i in range(1, 3_001)])
        curve = tmp_path / "curve.csv"
        result = runner.invoke(main, ["estimate", path, "--curve", str(curve)])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["k"] >= 5
        assert list(pd.read_csv(curve).columns) == ["k", "d_k", "hill", "alpha_hat"]

    def test_curve_to_excel(self, runner, tmp_path):
        path = write_degrees(tmp_path / "d.txt", [round(10_000 / i) for i in range(1, 1_001)])
        curve = tmp_path / "curve.xlsx"
        result = runner.invoke(main, ["estimate", path, "--curve", str(curve)])
        assert result.exit_code == 0, result.output
        workbook = load_workbook(curve)
        assert workbook.sheetnames == ["Curve"]
        assert [c.value for c in workbook["Curve"][1]] == ["k", "d_k", "hill", "alpha_hat"]

    def test_degenerate_exits_one(self, runner, tmp_path):
        path = write_degrees(tmp_path / "d.txt", [3] * 20)
        result = runner.invoke(main, ["estimate", path])
        assert result.exit_code == 1
        assert "degenerate tail" in result.stderr

    def test_missing_file_exits_two(self, runner, tmp_path):
        assert runner.invoke(main, ["estimate", str(tmp_path / "none.txt")]).exit_code == 2

    def test_hill_needs_k(self, runner, tmp_path):
        path = write_degrees(tmp_path / "d.txt", [8, 4, 2])
        assert runner.invoke(main, ["estimate", path, "--method", "hill"]).exit_code == 2


class TestTheory:
    def test_law_table(self, runner):
        result = runner.invoke(main, ["theory", "--kmax", "3"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "k,p_k,p_gt_k"

    def test_expected_counts(self, runner, tmp_path):
        law, mu = tmp_path / "law.csv", tmp_path / "mu.csv"
        result = runner.invoke(main, ["theory", "--n", "50", "--kmax", "5", "--out", str(law),
                                      "--mu-out", str(mu), "--bound"])
        assert result.exit_code == 0, result.output
        assert list(pd.read_csv(law).columns) == ["k", "p_k", "p_gt_k"]
        assert list(pd.read_csv(mu).columns) == ["m", "k", "mu_gt_k", "eps_gt_k"]
        report = json.loads(result.output)
        assert report["sup_abs_eps"] <= report["bound"]

    def test_expected_counts_keep_law_table(self, runner):
        result = runner.invoke(main, ["theory", "--n", "10", "--kmax", "3"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "k,p_k,p_gt_k"
        assert lines[3].startswith("3,") and lines[4] == ""
        assert lines[5] == "m,k,mu_gt_k,eps_gt_k"


class TestEmbed:
    def test_batch_with_check(self, runner):
        result = runner.invoke(main, ["embed", "--n", "100", "--reps", "20", "--check"])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[0] == "rep,T_n,w_hat,sigma_hat_1,max_scaled_degree"
        assert "sigma_hat_1" in result.output.splitlines()[-1]


class TestReplicate:
    def test_run_and_qq(self, runner, tmp_path):
        config = tmp_path / "grid.conf"
        config.write_text("deltas = 0\nns = 1000\nreps = 10\n")
        out = tmp_path / "results"
        result = runner.invoke(main, ["replicate", "--config", str(config), "--output-dir", str(out), "--excel"])
        assert result.exit_code == 0, result.output
        assert (out / "records.csv").exists()
        assert (out / "report.xlsx").exists()

        qq_out = tmp_path / "qq.csv"
        result = runner.invoke(main, ["qq", str(out / "records.csv"), "--delta", "0", "--n", "1000",
                                      "--out", str(qq_out)])
        assert result.exit_code == 0, result.output
        assert len(pd.read_csv(qq_out)) == 10

    def test_bad_config_exits_two(self, runner, tmp_path):
        config = tmp_path / "grid.conf"
        config.write_text("colour = red\n")
        assert runner.invoke(main, ["replicate", "--config", str(config)]).exit_code == 2

    def test_sizes_below_tail_room_exit_two(self, runner, tmp_path):
        config = tmp_path / "grid.conf"
        config.write_text("ns = 6\nreps = 3\n")
        result = runner.invoke(main, ["replicate", "--config", str(config), "--output-dir", str(tmp_path)])
        assert result.exit_code == 2
        assert "k_min + 2" in result.stderr

    def test_missing_config_exits_two(self, runner, tmp_path):
        assert runner.invoke(main, ["replicate", "--config", str(tmp_path / "none.conf")]).exit_code == 2


class TestConsistency:
    def test_small_sweep(self, runner, tmp_path):
        result = runner.invoke(main, ["consistency", "--deltas", "0", "--ns", "1000", "--reps", "2",
                                      "--output-dir", str(tmp_path)])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "consistency.csv").exists()

    def test_bad_list(self, runner):
        assert runner.invoke(main, ["consistency", "--deltas", "zero"]).exit_code == 2


class TestRuns:
    def test_lists_logged_runs(self, runner, tmp_path):
        runner.invoke(main, ["consistency", "--deltas", "0", "--ns", "1000", "--reps", "2",
                             "--output-dir", str(tmp_path)])
        result = runner.invoke(main, ["runs", "--output-dir", str(tmp_path)])
        assert result.exit_code == 0, result.output
        header = result.output.splitlines()[0].split()
        assert header == ["time", "event_type", "action", "config_hash"]
        assert "consistency" in result.output

    def test_empty_directory(self, runner, tmp_path):
        result = runner.invoke(main, ["runs", "--output-dir", str(tmp_path)])
        assert result.exit_code == 0
        assert "no runs logged" in result.output
