"""Deformations of trivial groupoids lifted from dilatations of the carrier.

A family of based dilatations ``delta^x_eps`` on a metric space lifts to the
deformation ``delta_eps((p, q)) = (delta^q_eps p, q)`` of its trivial
groupoid. Over a homogeneous group the lift acts on arrow offsets by the
group dilations.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from ..constructions import HomogeneousGroupoid, MetricSpaceModel, TrivialGroupoid, validate_metric_space
from ..deformation import Deformation, DomainWitness, ScalingGroup
from ..errors import AxiomViolation
from ..groupoid import ATOL, Arrow

logger = logging.getLogger('ngdef')


class HomogeneousDeformation(Deformation):
    """Group dilations acting on the offsets of a :class:`HomogeneousGroupoid`."""

    def __init__(self, groupoid: HomogeneousGroupoid, gamma: Optional[ScalingGroup] = None,
                 domain_bound: Optional[float] = None, witness: Optional[DomainWitness] = None):
        super().__init__(groupoid, gamma, domain_bound, witness)
        self.name = f"dilations({groupoid.group.name})"

    def _apply(self, scale: float, g: Arrow) -> Arrow:
        group = self.groupoid.group
        w = group.dilate(scale, g.payload)
        return Arrow(g.source, group.multiply(g.source, w), w)


@dataclass(frozen=True)
class MetricDilatationStructure:
    """
    Based dilatations ``dilatation(eps, x, y) = delta^x_eps y`` on a metric space.

    ``eps`` is the positive real absolute value of the scale.
    """

    name: str
    space: MetricSpaceModel
    dilatation: Callable[[float, Any, Any], Any]

    def axiom_violations(self, rng: np.random.Generator, count: int = 200, radius: float = 1.0,
                         scales: Sequence[float] = (0.5, 0.25, 0.125)) -> Dict[str, Tuple[float, Any]]:
        """
        Worst violation of each sampled axiom.

        ``fixes-base``: ``delta^x_eps x = x``; ``unit``: ``delta^x_1 = id``;
        ``semigroup``: ``delta^x_eps delta^x_mu y = delta^x_{eps mu} y``;
        ``contraction``: ``d(x, delta^x_eps y)`` shrinks with ``eps`` and is
        at most ``eps`` times the bound of the ball.
        """
        d, dil = self.space.distance, self.dilatation
        worst: Dict[str, Tuple[float, Any]] = {name: (0.0, None) for name in
                                               ("fixes-base", "unit", "semigroup", "contraction")}

        def record(axiom: str, value: float, witness: Any) -> None:
            if value > worst[axiom][0]:
                worst[axiom] = (value, witness)

        for _ in range(count):
            x = self.space.sample(rng, None, radius)
            y = self.space.sample(rng, x, radius)
            eps, mu = (float(v) for v in rng.uniform(0.1, 1.0, size=2))
            scale = 1.0 + d(x, y)
            record("fixes-base", d(dil(eps, x, x), x) / scale, (eps, x))
            record("unit", d(dil(1.0, x, y), y) / scale, (x, y))
            record("semigroup", d(dil(eps, x, dil(mu, x, y)), dil(eps * mu, x, y)) / scale, (eps, mu, x, y))
            previous = d(x, y)
            for s in scales:
                current = d(x, dil(s, x, y))
                record("contraction", max(0.0, current - previous) / scale, (s, x, y))
                previous = current
            record("contraction", max(0.0, previous - 2.0 * radius * scales[-1]), (scales[-1], x, y))
        return worst


class LiftedDeformation(Deformation):
    """``delta_eps((p, q)) = (delta^q_eps p, q)`` on the trivial groupoid of the carrier."""

    def __init__(self, structure: MetricDilatationStructure, gamma: Optional[ScalingGroup] = None,
                 domain_bound: Optional[float] = None, witness: Optional[DomainWitness] = None):
        super().__init__(TrivialGroupoid(structure.space), gamma, domain_bound, witness)
        self.structure = structure
        self.name = f"lift({structure.name})"

    def _apply(self, scale: float, g: Arrow) -> Arrow:
        p, q = g.target, g.source
        return Arrow(q, self.structure.dilatation(scale, q, p))


def lift_dilatation_structure(structure: MetricDilatationStructure, samples: int = 200, seed: int = 0,
                              radius: float = 1.0, tol: float = ATOL, **kwargs: Any) -> LiftedDeformation:
    """
    Lift a metric dilatation structure to its trivial groupoid.

    Args:
        structure: Based dilatations on a metric space
        samples: Number of sampled points per axiom
        seed: Sampling seed
        radius: Radius of the sampled ball
        tol: Tolerance on relative violations
        **kwargs: Passed to :class:`LiftedDeformation`

    Returns:
        The lifted deformation

    Raises:
        InvalidModelSpec: If the carrier is not a metric space
        AxiomViolation: With the failing axiom and its witness
    """
    rng = np.random.default_rng(seed)
    validate_metric_space(structure.space, rng, samples, tol=tol)
    violations = structure.axiom_violations(rng, samples, radius)
    for axiom, (value, witness) in violations.items():
        if value > tol:
            raise AxiomViolation(axiom, witness, value)
    logger.debug(f"lifting {structure.name}: dilatation axioms hold on {samples} samples")
    return LiftedDeformation(structure, **kwargs)
