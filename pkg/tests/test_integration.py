"""Integration tests: whole verify runs on the built-in models."""

import pytest

from ngdef.main import cli

from .conftest import load_reports

pytestmark = [pytest.mark.integration, pytest.mark.slow]

HEISENBERG_EXACT = ["groupoid-axioms", "norm-axioms", "seminorm-family", "alpha-double", "right-invariance",
                    "deformation-action", "double-deformation", "induced-structures", "approximate-operations",
                    "irq-laws"]


class TestVerifyWorkflows:
    def test_euclidean_passes_everything(self, runner, experiment, tmp_path):
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["verify", "-m", "euclidean(2)", "-n", "32", "-o", str(out)])
        assert result.exit_code == 0, result.output
        reports = load_reports(out)
        bundle = experiment.build(experiment.load_config().merged(model="euclidean(2)"))
        assert list(reports) == experiment.suite_registry.applicable(bundle)
        assert reports["structure"]["details"]["verdict"] == "gs"

    def test_heisenberg_exact_suites(self, runner, tmp_path):
        out = tmp_path / "reports.json"
        args = ["verify", "-m", "heisenberg", "-n", "32", "-o", str(out)]
        for suite in HEISENBERG_EXACT:
            args += ["-s", suite]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.output
        assert all(r["pass"] for r in load_reports(out).values())

    def test_finite_irq(self, runner, tmp_path):
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["verify", "-m", "finite(z5_affine_irq)", "-o", str(out)])
        assert result.exit_code == 0, result.output
        assert list(load_reports(out)) == ["irq-laws"]

    def test_frozen_deformation_is_caught(self, runner, tmp_path):
        out = tmp_path / "reports.json"
        result = runner.invoke(cli, ["verify", "-m", "broken-euclidean(1)", "-s", "groupoid-axioms",
                                     "-s", "deformation-contraction", "--center", "[0.5]", "--radius", "0.25",
                                     "-n", "16", "-o", str(out)])
        assert result.exit_code == 1
        reports = load_reports(out)
        assert reports["groupoid-axioms"]["pass"] is True
        assert reports["deformation-contraction"]["pass"] is False


class TestConfiguredExperiments:
    def test_one_configuration_drives_every_command(self, runner, config_file, points_file, tmp_path):
        path = config_file({
            "model": "euclidean(1)",
            "samples": 4,
            "steps": 12,
            "limit_tol": 1e-3,
            "suites": ["groupoid-axioms", "deformation-action"],
            "op": "dilatation",
            "mu": 0.5,
            "points": points_file([[[0.0], [2.0]]]),
        })
        reports, limits, tangent = tmp_path / "reports.json", tmp_path / "limits.csv", tmp_path / "tangent.json"

        assert runner.invoke(cli, ["--config", path, "verify", "-o", str(reports)]).exit_code == 0
        assert list(load_reports(reports)) == ["groupoid-axioms", "deformation-action"]
        result = runner.invoke(cli, ["--config", path, "limits", "-o", str(limits)])
        assert result.exit_code == 0, result.output
        assert limits.read_text().splitlines()[-1].split(",")[1] == "limit"
        assert runner.invoke(cli, ["--config", path, "tangent", "-o", str(tangent)]).exit_code == 0
