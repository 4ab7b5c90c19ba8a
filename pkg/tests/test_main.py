"""Tests for the Experiment class and the CLI interface."""

import csv
import json

import pytest

from ngdef.config import ExperimentConfig
from ngdef.errors import ConfigError, Unsupported
from ngdef.main import Experiment, cli, parse_value, read_points

from .conftest import load_reports

pytestmark = pytest.mark.cli


def run_without_timestamps(reports):
    return {check: {k: v for k, v in r.items() if k != "timestamp"} for check, r in reports.items()}


class TestExperiment:
    """Test the Experiment class."""

    def test_initialization(self, experiment):
        assert "heisenberg" in experiment.get_model_info()
        assert "groupoid-axioms" in experiment.get_suite_info()
        assert experiment.load_config() == ExperimentConfig()

    def test_verify_runs_every_applicable_suite(self, experiment):
        config = ExperimentConfig(model="finite(triangle)", samples=8)
        reports = experiment.verify(config)
        assert [r.check for r in reports] == experiment.suite_registry.applicable(experiment.build(config))
        assert all(r.passed for r in reports)

    def test_verify_rejects_inapplicable_suites(self, experiment):
        with pytest.raises(Unsupported):
            experiment.verify(ExperimentConfig(model="heisenberg", suites=["action-groupoid"], samples=4))

    def test_limits_need_an_operation(self, experiment, points_file):
        with pytest.raises(ConfigError, match="no operation"):
            experiment.limits(ExperimentConfig(model="euclidean(1)", points=points_file([[[1.0]]])))

    def test_parse_value(self):
        assert parse_value("[1.0, 2]") == [1.0, 2]
        assert parse_value("a") == "a"
        assert parse_value(None) is None

    def test_read_points(self, points_file, tmp_path):
        assert read_points(points_file([[1.0], [[2.0], [3.0]]])) == [[1.0], [[2.0], [3.0]]]
        assert read_points(points_file([1.0])) == [[1.0]]
        with pytest.raises(ConfigError, match="no rows"):
            read_points(points_file([], "empty.json"))
        with pytest.raises(ConfigError):
            read_points(points_file({"rows": []}, "table.json"))
        with pytest.raises(ConfigError):
            read_points(str(tmp_path / "missing.json"))


class TestCLI:
    """Global options of the CLI group."""

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "ngdef 0.1.0" in result.output

    def test_list_models_and_suites(self, runner):
        result = runner.invoke(cli, ["--list-models", "--list-suites"])
        assert result.exit_code == 0
        assert "Available models:" in result.output
        assert "  euclidean:" in result.output
        assert "  fiber-structure:" in result.output

    def test_help_without_command(self, runner):
        result = runner.invoke(cli, [])
        assert result.exit_code == 0
        assert "verify" in result.output and "tangent" in result.output

    def test_missing_config_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["--config", str(tmp_path / "nope.toml"), "verify"])
        assert result.exit_code == 2


class TestVerifyCommand:
    """Exit codes and report files of ``verify``."""

    def test_passing_suite(self, runner, tmp_path):
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["verify", "-m", "euclidean(2)", "-s", "groupoid-axioms", "-n", "16",
                                     "--out", str(out)])
        assert result.exit_code == 0, result.output
        report = load_reports(out)["groupoid-axioms"]
        assert report["pass"] is True
        assert report["model"] == "euclidean(2)"
        assert report["sampler"]["count"] == 16

    def test_failing_suite_exits_with_1(self, runner, tmp_path):
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["verify", "-m", "defective-norm(1)", "-s", "norm-axioms", "-n", "64",
                                     "-o", str(out)])
        assert result.exit_code == 1
        assert "Failed suites: norm-axioms" in result.output
        assert load_reports(out)["norm-axioms"]["pass"] is False

    @pytest.mark.parametrize("args", [
        ["verify"],
        ["verify", "-m", "nosuch"],
        ["verify", "-m", "euclidean(0)"],
        ["verify", "-m", "euclidean(1)", "-s", "nosuch"],
        ["verify", "-m", "heisenberg", "-s", "action-groupoid"],
        ["verify", "-m", "euclidean(1)", "-n", "0"],
        ["verify", "-m", "euclidean(1)", "--lambda", "2.0"],
    ])
    def test_usage_errors_exit_with_2(self, runner, args):
        result = runner.invoke(cli, args)
        assert result.exit_code == 2, result.output

    def test_runs_are_reproducible(self, runner, tmp_path):
        args = ["verify", "-m", "heisenberg", "-s", "norm-axioms", "-s", "alpha-double", "-n", "8"]
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        assert runner.invoke(cli, args + ["-o", str(first)]).exit_code == 0
        assert runner.invoke(cli, args + ["-o", str(second)]).exit_code == 0
        assert run_without_timestamps(load_reports(first)) == run_without_timestamps(load_reports(second))

    def test_seed_from_environment(self, runner, tmp_path):
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["verify", "-m", "euclidean(1)", "-s", "norm-axioms", "-n", "4", "-o", str(out)],
                               env={"NGDEF_SEED": "7"})
        assert result.exit_code == 0
        assert load_reports(out)["norm-axioms"]["seed"] == 7

    def test_flags_override_the_configuration(self, runner, config_file, tmp_path):
        path = config_file({"model": "euclidean(1)", "suites": ["groupoid-axioms"], "samples": 8, "seed": 3})
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["--config", path, "verify", "-n", "4", "-o", str(out)])
        assert result.exit_code == 0, result.output
        report = load_reports(out)["groupoid-axioms"]
        assert report["sampler"]["count"] == 4
        assert report["seed"] == 3

    def test_invalid_configuration(self, runner, config_file):
        path = config_file({"model": "euclidean(1)", "sampels": 8})
        result = runner.invoke(cli, ["--config", path, "verify"])
        assert result.exit_code == 2
        assert "sampels" in result.output


class TestLimitsCommand:
    """CSV tables of ``limits``."""

    def test_sum_table(self, runner, points_file, tmp_path):
        out = tmp_path / "limits.csv"
        points = points_file([[[1.0], [2.0]], [[0.5], [-0.5]]])
        result = runner.invoke(cli, ["limits", "-m", "euclidean(1)", "--op", "sum", "--points", points,
                                     "--steps", "12", "--limit-tol", "1e-3", "-o", str(out)])
        assert result.exit_code == 0, result.output

        with open(out, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["row", "eps", "value_0", "residual"]
        limit_rows = [r for r in rows[1:] if r[1] == "limit"]
        assert [r[0] for r in limit_rows] == ["0", "1"]
        assert float(limit_rows[0][2]) == pytest.approx(3.0, abs=1e-6)
        assert float(limit_rows[1][2]) == pytest.approx(0.0, abs=1e-6)

    def test_sum_of_long_arrows(self, runner, points_file, tmp_path):
        out = tmp_path / "limits.csv"
        points = points_file([[[3.0], [3.0]]])
        result = runner.invoke(cli, ["limits", "-m", "euclidean(1)", "--op", "sum", "--points", points,
                                     "--steps", "12", "--limit-tol", "1e-3", "-o", str(out)])
        assert result.exit_code == 0, result.output
        with open(out, newline="") as f:
            limit_row = next(r for r in csv.reader(f) if r[1] == "limit")
        assert float(limit_row[2]) == pytest.approx(6.0, abs=1e-6)

    def test_json_lines_without_out(self, runner, points_file):
        points = points_file([[[0.6, 0.8]]])
        result = runner.invoke(cli, ["limits", "-m", "euclidean(2)", "--op", "norm", "--points", points,
                                     "--steps", "12", "--limit-tol", "1e-3"])
        assert result.exit_code == 0, result.output
        line = next(l for l in result.output.splitlines() if l.startswith("{"))
        assert json.loads(line)["value"] == pytest.approx(1.0)

    def test_divergent_rows_exit_with_1(self, runner, points_file, tmp_path):
        points = points_file([[[2.0], [1.5]]])
        result = runner.invoke(cli, ["limits", "-m", "broken-euclidean(1)", "--op", "distance", "--base", "[1.0]",
                                     "--points", points, "--steps", "12", "-o", str(tmp_path / "limits.csv")])
        assert result.exit_code == 1
        assert "Rows without a limit: 0" in result.output

    def test_wrong_arity_is_a_usage_error(self, runner, points_file):
        points = points_file([[[1.0]]])
        result = runner.invoke(cli, ["limits", "-m", "euclidean(1)", "--op", "sum", "--points", points])
        assert result.exit_code == 2
        assert "takes 2 points" in result.output

    def test_missing_operation(self, runner, points_file):
        result = runner.invoke(cli, ["limits", "-m", "euclidean(1)", "--points", points_file([[[1.0]]])])
        assert result.exit_code == 2


class TestTangentCommand:
    """Verdicts of ``tangent``."""

    def test_euclidean_fiber_is_weak(self, runner, tmp_path):
        out = tmp_path / "tangent.json"
        result = runner.invoke(cli, ["tangent", "-m", "euclidean(1)", "-n", "4", "--steps", "12",
                                     "--limit-tol", "1e-3", "-o", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["verdict"] == "gw"
        assert data["object"] == [0.0]
        assert data["model"] == "euclidean(1)"
        assert all(r["pass"] for r in data["reports"])

    def test_frozen_fiber_is_neither(self, runner, tmp_path):
        out = tmp_path / "tangent.json"
        result = runner.invoke(cli, ["tangent", "-m", "broken-euclidean(1)", "--object", "[1.0]",
                                     "--check", "contraction", "-n", "4", "--steps", "12", "-o", str(out)])
        assert result.exit_code == 1
        assert "Failed contraction" in result.output
        assert json.loads(out.read_text())["verdict"] == "neither"

    @pytest.mark.parametrize("args", [
        ["tangent", "-m", "euclidean(1)", "--object", "[1.0, 2.0, 3.0]"],
        ["tangent", "-m", "finite(triangle)"],
        ["tangent", "-m", "euclidean(1)", "--check", "triangle"],
    ])
    def test_usage_errors(self, runner, args):
        assert runner.invoke(cli, args).exit_code == 2
