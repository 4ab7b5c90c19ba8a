"""Suites for idempotent right quasigroups and the Gamma-irqs of dilatations."""

import logging
from itertools import product
from typing import Any, Iterator, Tuple

from ...errors import NgdefError
from ...irq import DilatationIrq, Direction, Irq, identity_gaps
from ...models.base import ModelBundle
from ...models.sampling import BoundedSampler
from ..estimate import EpsSchedule
from ..reports import CheckReport, ViolationTracker
from .base import CheckSuite

logger = logging.getLogger('ngdef')

# Finite irqs with at most this many quadruples are checked on all of them.
EXHAUSTIVE_QUADRUPLES = 4096

# Norm radius of fiber samples for the Gamma-irq identities.
FIBER_RADIUS = 0.25

# Iterates checked on finite irqs.
ITERATES = (2, 3, -1)


def _record(tracker: ViolationTracker, gaps: dict, witness: Any) -> None:
    for law, value in gaps.items():
        tracker.add(value, {"law": law, "sample": witness})


def _quadruples(irq: Irq, sampler: BoundedSampler) -> Iterator[Tuple[Any, ...]]:
    elements = irq.elements()
    if len(elements) ** 4 <= EXHAUSTIVE_QUADRUPLES:
        return product(elements, repeat=4)
    rng = sampler.rng()
    return (tuple(irq.sample(rng) for _ in range(4)) for _ in range(sampler.count))


class IrqLawsSuite(CheckSuite):
    """
    Quasigroup axioms and the identities of the derived operations.

    A finite irq is checked on all pairs, all quadruples when there are few
    of them, and through its iterates. A model with a deformation is checked
    through the Gamma-irq of dilatations on the fibers over sampled objects:
    the axioms at each scale, the Gamma law, the derived identities,
    distributivity, iterates as powers of the scale and agreement with the
    based approximate operations.
    """

    @property
    def name(self) -> str:
        return "irq-laws"

    @property
    def description(self) -> str:
        return "irq axioms, derived-operation identities and Gamma-irq laws"

    def applies_to(self, bundle: ModelBundle) -> bool:
        return bundle.irq is not None or (bundle.groupoid is not None and bundle.deformation is not None)

    def run(self, bundle: ModelBundle, sampler: BoundedSampler, schedule: EpsSchedule, tol: float) -> CheckReport:
        tracker = ViolationTracker()
        if bundle.irq is not None:
            self._finite(bundle.irq, sampler, tracker)
        if bundle.deformation is not None:
            self._dilatations(bundle, sampler, tracker)
        return self.report(tracker, bundle, sampler, tol)

    def _finite(self, irq: Irq, sampler: BoundedSampler, tracker: ViolationTracker) -> None:
        elements = irq.elements()
        for x, y in product(elements, repeat=2):
            _record(tracker, irq.axiom_gaps(x, y), (x, y))
            tracker.add(irq.gap(irq.iterate(-1, Direction.CIRC, x, y), irq.bullet(x, y)),
                        {"law": "negative-iterate", "sample": (x, y)})
            for k in ITERATES:
                _record(tracker, irq.iterated(k).axiom_gaps(x, y), {"iterate": k, "pair": (x, y)})
        for x, u, v, w in _quadruples(irq, sampler):
            _record(tracker, identity_gaps(irq, x, u, v, w), (x, u, v, w))

    def _dilatations(self, bundle: ModelBundle, sampler: BoundedSampler, tracker: ViolationTracker) -> None:
        G = bundle.groupoid
        rng = sampler.rng()
        for x in sampler.objects(G):
            try:
                family: DilatationIrq = bundle.fiber_irq(x)
            except NgdefError as e:
                tracker.add(float("inf"), {"object": x, "error": str(e)})
                continue
            gamma = family.gamma
            eps, mu = gamma.sample(rng), gamma.sample(rng)
            base, u, v, w = (family.sample(rng, radius=FIBER_RADIUS) for _ in range(4))
            fixed = family.at(eps)
            d = family.deformation
            witness = {"object": x, "eps": gamma.modulus(eps), "mu": gamma.modulus(mu), "sample": (base, u, v, w)}
            try:
                gaps = dict(fixed.axiom_gaps(base, u))
                gaps.update(identity_gaps(fixed, base, u, v, w))
                gaps["gamma-law"] = family.gamma_law_gap(eps, mu, base, u)
                gaps["distributivity"] = family.distributivity_gap(eps, mu, base, u, v)
                gaps["iterate-is-power"] = family.gap(fixed.iterate(2, Direction.CIRC, base, u),
                                                      family.circ_at(gamma.product(eps, eps), base, u))
                gaps["negative-iterate"] = family.gap(fixed.iterate(-1, Direction.CIRC, base, u),
                                                      fixed.bullet(base, u))
                gaps["sum-is-based-sum"] = family.gap(fixed.sum(base, u, v), d.based_sum(eps, base, u, v))
                gaps["diff-is-based-diff"] = family.gap(fixed.diff(base, u, v), d.based_diff(eps, base, u, v))
                gaps["inv-is-based-inv"] = family.gap(fixed.inv(base, u), d.based_inv(eps, base, u))
            except (NgdefError, ValueError, ArithmeticError) as e:
                tracker.add(float("inf"), {**witness, "error": str(e)})
                continue
            _record(tracker, gaps, witness)
