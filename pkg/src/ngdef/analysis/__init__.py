"""Limit estimation, check reports, tangent structures and check suites."""

from .estimate import EpsSchedule, LimitEstimate, check_uniform_convergence, estimate_limit, fit_order
from .reports import CheckReport, ViolationTracker, write_limit_csv, write_reports_json
from .structure import (FIBER_CHECKS, FiberDilatationStructure, TangentOp, Verdict, check_cone,
                        classify_structure, fiber_dilatation_structure, tangent_difference, tangent_distance,
                        tangent_norm, tangent_op)
from .suites import CheckSuite, SuiteRegistry, default_suite_registry, run_check_suite

__all__ = [
    "CheckReport",
    "CheckSuite",
    "EpsSchedule",
    "FIBER_CHECKS",
    "FiberDilatationStructure",
    "LimitEstimate",
    "SuiteRegistry",
    "TangentOp",
    "Verdict",
    "ViolationTracker",
    "check_cone",
    "check_uniform_convergence",
    "classify_structure",
    "default_suite_registry",
    "estimate_limit",
    "fiber_dilatation_structure",
    "fit_order",
    "run_check_suite",
    "tangent_difference",
    "tangent_distance",
    "tangent_norm",
    "tangent_op",
    "write_limit_csv",
    "write_reports_json",
]
