"""Base check-suite interface for ngdef."""

import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

from ...models.base import ModelBundle
from ...models.sampling import BoundedSampler
from ..estimate import EpsSchedule
from ..reports import CheckReport, ViolationTracker

logger = logging.getLogger('ngdef')


class SuiteKind(str, Enum):
    """Exact suites compare identities; limit suites estimate eps -> 0 limits."""

    EXACT = "exact"
    LIMIT = "limit"


class CheckSuite(ABC):
    """
    Abstract base class for check suites.

    A suite checks one family of laws on a model and condenses the result
    into a single :class:`CheckReport`.
    """

    kind: SuiteKind = SuiteKind.EXACT

    # Upper bound on the sample count; limit suites evaluate whole schedules per sample.
    sample_cap: Optional[int] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Return the suite id.

        This id is used in reports and on the command line.
        """
        pass

    @property
    def description(self) -> str:
        return f"{self.name} checks"

    def applies_to(self, bundle: ModelBundle) -> bool:
        """Whether the model provides what the suite needs."""
        return bundle.groupoid is not None

    @abstractmethod
    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        """
        Run the suite.

        Args:
            bundle: Model under test
            sampler: Seeded sampler, already capped to the suite's sample count
            schedule: Geometric schedule for limit checks
            tol: Tolerance on the maximum violation

        Returns:
            Report with the maximum violation and the worst witnesses
        """
        pass

    def report(self, tracker: ViolationTracker, bundle: ModelBundle, sampler: BoundedSampler, tol: float,
               schedule: Optional[EpsSchedule] = None) -> CheckReport:
        """Condense a tracker into this suite's report."""
        return tracker.report(self.name, bundle.name, sampler.seed, tol, sampler=sampler.to_dict(),
                              schedule=schedule.to_dict() if schedule is not None else None)
