"""Suites for the tangent structures of a deformation."""

import logging

from ...errors import NotGw
from ...models.base import ModelBundle
from ...models.sampling import BoundedSampler
from ..estimate import EpsSchedule
from ..reports import CheckReport, ViolationTracker
from ..structure import (LIMIT_RADIUS, STRONG_CHECKS, WEAK_CHECKS, Verdict, check_cone, classify_structure,
                         fiber_dilatation_structure)
from .base import CheckSuite, SuiteKind

logger = logging.getLogger('ngdef')

# Scales of the cone identity.
CONE_SCALES = (0.5, 0.25)


class TangentSuite(CheckSuite):
    kind = SuiteKind.LIMIT

    def applies_to(self, bundle: ModelBundle) -> bool:
        return bundle.groupoid is not None and bundle.deformation is not None


class ConeSuite(TangentSuite):
    """Tangent distances scale by ``|mu|`` under dilatations, and limit dilatations at the base are dilatations."""

    sample_cap = 16

    @property
    def name(self) -> str:
        return "cone"

    @property
    def description(self) -> str:
        return "cone identities of tangent distances and limit dilatations"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        G, d = bundle.groupoid, bundle.deformation
        gamma = d.gamma
        rng = sampler.rng()
        tracker = ViolationTracker()
        radius = min(sampler.radius, LIMIT_RADIUS)
        for x in sampler.objects(G):
            u, v = G.sample_fiber(rng, x, radius), G.sample_fiber(rng, x, radius)
            for scale in CONE_SCALES:
                try:
                    mu = gamma.from_modulus(scale)
                except ValueError:
                    mu = gamma.sample(rng, 0.1, 0.9)
                cone = check_cone(d, x, u, v, mu, schedule, tol)
                tracker.add(cone.max_violation, {"object": x, "mu": gamma.modulus(mu), "witnesses": cone.witnesses})
        return self.report(tracker, bundle, sampler, tol, schedule)


class StructureSuite(TangentSuite):
    """
    Classify the deformation as a strong or weak structure.

    The suite passes when the deformation is at least weak. Its violation is
    the largest one among the checks the reached verdict rests on, or among
    the weak checks when neither structure is reached.
    """

    sample_cap = 32

    @property
    def name(self) -> str:
        return "structure"

    @property
    def description(self) -> str:
        return "strong (gs) or weak (gw) structure classification"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        verdict, reports = classify_structure(bundle.deformation, sampler, schedule, tol, model=bundle.name)
        relevant = WEAK_CHECKS + STRONG_CHECKS if verdict is Verdict.STRONG else WEAK_CHECKS
        tracker = ViolationTracker()
        for report in reports:
            if report.check in relevant:
                tracker.add(report.max_violation, {"check": report.check, "witnesses": report.witnesses})
        result = self.report(tracker, bundle, sampler, tol, schedule)
        result.samples = max((r.samples for r in reports), default=0)
        result.details["verdict"] = verdict.value
        result.details["checks"] = {r.check: {"pass": r.passed, "max_violation": r.max_violation} for r in reports}
        return result


class FiberSuite(TangentSuite):
    """The fiber over the model's object is a dilatation structure."""

    sample_cap = 16

    @property
    def name(self) -> str:
        return "fiber-structure"

    @property
    def description(self) -> str:
        return "dilatation structure axioms of one fiber"

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        x = bundle.object(sampler.center)
        try:
            reports = fiber_dilatation_structure(bundle.deformation, x, sampler, schedule, tol, tol,
                                                 model=bundle.name).reports
        except NotGw as e:
            reports = e.reports
        tracker = ViolationTracker()
        for report in reports:
            tracker.add(report.max_violation, {"check": report.check, "witnesses": report.witnesses})
        result = self.report(tracker, bundle, sampler, tol, schedule)
        result.samples = sampler.count
        result.details["object"] = x
        result.details["checks"] = {r.check: r.passed for r in reports}
        return result
