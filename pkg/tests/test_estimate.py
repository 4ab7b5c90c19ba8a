"""Tests for limit estimation along geometric schedules and for report writers."""

import csv
import json

import numpy as np
import pytest

from ngdef.analysis import (CheckReport, EpsSchedule, ViolationTracker, check_uniform_convergence, estimate_limit,
                            fit_order, write_limit_csv, write_reports_json)
from ngdef.deformation import DyadicScaling
from ngdef.errors import ConfigError, DomainExhausted, NotConverging


class TestEpsSchedule:
    def test_scales(self):
        schedule = EpsSchedule(0.5, 1, 3)
        assert list(schedule) == [0.5, 0.25, 0.125]
        assert len(schedule) == 3
        assert schedule.to_dict() == {"lambda": 0.5, "start": 1, "steps": 3}
        assert schedule.scales(DyadicScaling()) == [1, 2, 3]

    def test_defaults(self, schedule):
        assert len(schedule) == 24
        assert list(schedule)[-1] == 0.5 ** 24

    @pytest.mark.parametrize("base,length", [(1.0, 24), (0.0, 24), (-0.5, 24), (0.5, 1)])
    def test_invalid_schedules(self, base, length):
        with pytest.raises(ConfigError):
            EpsSchedule(base, 1, length)


class TestEstimateLimit:
    """Residual traces, orders and extrapolation."""

    def test_linear_net_is_extrapolated_exactly(self, schedule):
        estimate = estimate_limit(lambda eps: 3.0 - eps, schedule)
        assert estimate.value == 3.0
        assert estimate.extrapolated
        assert estimate.converged
        assert estimate.order == pytest.approx(1.0)
        assert estimate.final_residual == 0.5 ** 24
        assert len(estimate.values) == 24 and len(estimate.residuals) == 23

    def test_quadratic_order(self, schedule):
        estimate = estimate_limit(lambda eps: 1.0 + eps * eps, schedule)
        assert estimate.order == pytest.approx(2.0, rel=1e-3)
        assert estimate.value == pytest.approx(1.0, abs=1e-12)

    def test_vector_values(self, short_schedule):
        estimate = estimate_limit(lambda eps: np.array([1.0 + eps, 2.0 - 2.0 * eps]), short_schedule, tol=1e-3)
        assert np.allclose(estimate.value, [1.0, 2.0])
        assert estimate.to_dict()["value"] == pytest.approx([1.0, 2.0])

    def test_without_extrapolation(self, short_schedule):
        estimate = estimate_limit(lambda eps: 3.0 - eps, short_schedule, tol=1e-3, extrapolate=False)
        assert not estimate.extrapolated
        assert estimate.value == 3.0 - 0.5 ** 12

    def test_constant_symbolic_values(self, short_schedule):
        estimate = estimate_limit(lambda eps: "aa", short_schedule)
        assert estimate.value == "aa"
        assert estimate.order is None
        assert estimate.converged
        assert not estimate.extrapolated

    def test_scaling_group_elements(self):
        """Dyadic exponents are passed to the net in place of the reals."""
        schedule = EpsSchedule(0.5, 1, 10)
        estimate = estimate_limit(lambda k: 0.5 ** k, schedule, tol=1e-2, scales=schedule.scales(DyadicScaling()))
        assert estimate.value == pytest.approx(0.0, abs=1e-15)

    def test_divergent_net(self, short_schedule):
        with pytest.raises(NotConverging) as exc_info:
            estimate_limit(lambda eps: 1.0 / eps, short_schedule)
        assert not exc_info.value.estimate.converged
        assert exc_info.value.estimate.final_residual == pytest.approx(2.0 ** 11)

    def test_failure_inside_the_schedule(self, schedule):
        def net(eps):
            if eps < 1e-3:
                raise ValueError("outside the domain")
            return eps

        with pytest.raises(DomainExhausted) as exc_info:
            estimate_limit(net, schedule)
        assert exc_info.value.eps == 0.5 ** 10
        assert isinstance(exc_info.value.cause, ValueError)

    def test_fit_order(self):
        assert fit_order([0.25 ** k for k in range(1, 11)], 0.5) == pytest.approx(2.0)
        assert fit_order([1e-3, 1e-4], 0.5) is None
        assert fit_order([1e-13] * 8, 0.5) is None


class TestUniformConvergence:
    def test_scaled_offsets_converge_uniformly(self, euclidean_line, schedule):
        G = euclidean_line.groupoid
        x = np.zeros(1)
        samples = [0.5, 1.0, -0.75]

        def net(eps, s):
            return G.with_offset(x, [s * (1.0 + eps)])

        def limit(s):
            return G.with_offset(x, [s])

        trace = check_uniform_convergence(net, limit, samples, list(schedule), G)
        assert trace.converged
        assert trace.final == pytest.approx(0.5 ** 24)

        shifted = check_uniform_convergence(lambda eps, s: G.with_offset(x, [s + 1.0]), limit, samples,
                                            list(schedule), G)
        assert not shifted.converged
        assert shifted.final == pytest.approx(1.0)


class TestReports:
    """Report records and their serializations."""

    def test_report_passes_within_tolerance(self):
        report = CheckReport("groupoid-axioms", "euclidean(1)", 10, 0, 1e-12, 1e-9)
        assert report.passed and report
        assert not CheckReport("norm-axioms", "euclidean(1)", 10, 0, 1e-3, 1e-9)
        data = report.to_dict()
        assert list(data) == ["check", "model", "samples", "seed", "max_violation", "tol", "pass", "witnesses",
                              "sampler", "schedule", "timestamp"]

    def test_infinite_violation_serializes(self):
        data = CheckReport("cone", "broken-euclidean(1)", 4, 0, float("inf"), 1e-9, details={"k": 1}).to_dict()
        assert data["max_violation"] == "inf"
        assert data["pass"] is False
        assert data["details"] == {"k": 1}

    def test_tracker_keeps_the_worst_witnesses(self):
        tracker = ViolationTracker(limit=2)
        for value, witness in [(0.1, "a"), (0.5, "b"), (float("nan"), "c"), (0.0, "d")]:
            tracker.add(value, witness)
        assert tracker.count == 4
        assert tracker.worst == float("inf")
        assert tracker.witnesses(0.2) == [{"violation": float("inf"), "witness": "c"},
                                          {"violation": 0.5, "witness": "b"}]
        report = tracker.report("check", "model", seed=3, tol=0.2)
        assert report.samples == 4 and report.seed == 3 and not report.passed

    def test_write_reports_json(self, tmp_path):
        path = tmp_path / "reports.json"
        write_reports_json([CheckReport("a", "m", 1, 0, 0.0, 1e-9), CheckReport("b", "m", 1, 0, 1.0, 1e-9)], path)
        data = json.loads(path.read_text())
        assert [r["check"] for r in data] == ["a", "b"]
        assert [r["pass"] for r in data] == [True, False]

    def test_write_limit_csv(self, tmp_path):
        schedule = EpsSchedule(0.5, 1, 4)
        scalar = estimate_limit(lambda eps: 3.0 - eps, schedule, tol=1.0)
        vector = estimate_limit(lambda eps: np.array([eps, 1.0]), schedule, tol=1.0)
        path = tmp_path / "limits.csv"
        write_limit_csv([scalar, vector], path)

        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["row", "eps", "value_0", "value_1", "residual"]
        assert len(rows) == 1 + 2 * 5
        assert rows[1] == ["0", "0.5", "2.5", "", ""]
        assert rows[5] == ["0", "limit", "3.0", "", str(0.5 ** 4)]
        assert rows[10][:4] == ["1", "limit", "0.0", "1.0"]
