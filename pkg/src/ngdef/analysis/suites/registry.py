"""Suite registry and suite runner."""

import logging
from typing import Optional

from ...errors import Unsupported, UnknownSuite
from ...models.base import ModelBundle
from ...models.sampling import BoundedSampler
from ...registry import Registry
from ..estimate import EpsSchedule
from ..reports import CheckReport
from .base import CheckSuite, SuiteKind

logger = logging.getLogger('ngdef')


class SuiteRegistry(Registry[CheckSuite]):
    """Registry for managing available check suites."""

    kind = "suite"
    missing_error = UnknownSuite

    def applicable(self, bundle: ModelBundle):
        """Ids of the suites that apply to a model, in registration order."""
        return [name for name in self._entries if self.get(name).applies_to(bundle)]


def run_check_suite(bundle: ModelBundle, suite_id: str, sampler: BoundedSampler,
                    schedule: Optional[EpsSchedule] = None, tol: float = 1e-9, limit_tol: float = 1e-6,
                    registry: Optional[SuiteRegistry] = None) -> CheckReport:
    """
    Run one suite on a model.

    Args:
        bundle: Model under test
        suite_id: Registered suite id
        sampler: Seeded sampler; limit suites cap its count
        schedule: Geometric schedule, default ``EpsSchedule()``
        tol: Tolerance of exact suites
        limit_tol: Tolerance of limit suites
        registry: Registry to look the suite up in; the built-in suites by default

    Returns:
        The report; identical for identical inputs apart from its timestamp

    Raises:
        UnknownSuite: If the id is not registered
        Unsupported: If the model lacks what the suite needs
    """
    if registry is None:
        from . import default_suite_registry
        registry = default_suite_registry()
    suite = registry.get(suite_id)
    if not suite.applies_to(bundle):
        raise Unsupported(f"suite {suite_id} does not apply to model {bundle.name}")
    schedule = schedule or EpsSchedule()
    if suite.sample_cap is not None and sampler.count > suite.sample_cap:
        sampler = sampler.with_count(suite.sample_cap)
    effective_tol = limit_tol if suite.kind is SuiteKind.LIMIT else tol

    logger.info(f"Running {suite_id} on {bundle.name} ({sampler.count} samples, seed {sampler.seed})")
    report = suite.run(bundle, sampler, schedule, effective_tol)
    status = "passed" if report.passed else "FAILED"
    logger.info(f"{suite_id} {status}: max violation {report.max_violation:.3g} (tol {effective_tol:.3g})")
    return report
