"""Estimation of eps -> 0 limits along geometric schedules.

A net is evaluated at ``eps_k = base^(start + k)``. Successive differences
give the residual trace; their ratios give the convergence order, and a
stable ratio ``rho < 1`` allows one step of geometric-series extrapolation
``L = v_m + rho / (1 - rho) (v_m - v_{m-1})``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np

from ..deformation import ScalingGroup
from ..errors import ConfigError, DomainExhausted, NgdefError, NotConverging
from ..groupoid import Arrow, ConvergenceMode, ConvergenceTrace, NormedGroupoid, accept_residuals, describe, is_numeric

logger = logging.getLogger('ngdef')

# Residuals at or below this level carry no usable ratio information.
RESIDUAL_FLOOR = 1e-12

# Relative spread of residual ratios accepted as geometric.
RATIO_SPREAD = 0.1


@dataclass(frozen=True)
class EpsSchedule:
    """Geometric schedule ``eps_k = base^(start + k)`` for ``k = 0 .. length - 1``."""

    base: float = 0.5
    start: int = 1
    length: int = 24

    def __post_init__(self):
        if not 0.0 < self.base < 1.0:
            raise ConfigError(f"schedule base must lie in (0, 1), got {self.base}")
        if self.length < 2:
            raise ConfigError(f"schedule needs at least 2 steps, got {self.length}")

    def __iter__(self) -> Iterator[float]:
        for k in range(self.length):
            yield self.base ** (self.start + k)

    def __len__(self) -> int:
        return self.length

    def scales(self, gamma: ScalingGroup) -> List[Any]:
        """Schedule as elements of a scaling group."""
        return [gamma.from_modulus(eps) for eps in self]

    def to_dict(self) -> Dict[str, Any]:
        return {"lambda": self.base, "start": self.start, "steps": self.length}


@dataclass
class LimitEstimate:
    """Outcome of :func:`estimate_limit`."""

    value: Any
    values: List[Any]
    residuals: List[float]
    order: Optional[float]
    converged: bool
    schedule: EpsSchedule
    extrapolated: bool = False
    scales: List[float] = field(default_factory=list)

    @property
    def final_residual(self) -> float:
        return self.residuals[-1] if self.residuals else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": describe(self.value),
            "order": self.order,
            "converged": self.converged,
            "final_residual": self.final_residual,
            "extrapolated": self.extrapolated,
            "schedule": self.schedule.to_dict(),
        }


def value_distance(a: Any, b: Any) -> float:
    """Maximum absolute difference of numeric values; 0/1 equality otherwise."""
    if is_numeric(a) and is_numeric(b):
        left, right = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        if left.shape != right.shape:
            return float("inf")
        return float(np.max(np.abs(left - right))) if left.size else 0.0
    return 0.0 if a == b else 1.0


def fit_order(residuals: Sequence[float], base: float) -> Optional[float]:
    """
    Order ``p`` with residual ratios close to ``base^p``.

    Uses the median ratio over the last quarter of the usable residuals.

    Returns:
        The order, or ``None`` when fewer than three residuals exceed the floor
    """
    ratios = _tail_ratios(residuals)
    if ratios is None:
        return None
    rho = float(np.median(ratios))
    if rho <= 0.0:
        return None
    return math.log(rho) / math.log(base)


def _tail_ratios(residuals: Sequence[float]) -> Optional[np.ndarray]:
    usable = [r for r in residuals if r > RESIDUAL_FLOOR]
    if len(usable) < 3:
        return None
    tail = usable[-max(3, len(usable) // 4 + 1):]
    return np.array([later / earlier for earlier, later in zip(tail, tail[1:])])


def estimate_limit(f: Callable[[Any], Any], schedule: EpsSchedule,
                   metric: Optional[Callable[[Any, Any], float]] = None, tol: float = 1e-6,
                   scales: Optional[Sequence[Any]] = None, extrapolate: bool = True) -> LimitEstimate:
    """
    Estimate ``lim_{eps -> 0} f(eps)`` along a schedule.

    Args:
        f: Net to evaluate
        schedule: Geometric schedule
        metric: Distance between two values; maximum absolute difference by default
        tol: Tolerance on the final residual
        scales: Scaling-group elements to pass to ``f`` instead of the schedule's reals
        extrapolate: Apply geometric extrapolation to numeric values when ratios are stable

    Returns:
        The estimate

    Raises:
        DomainExhausted: If ``f`` fails at some scale
        NotConverging: If the final residual exceeds ``tol``
    """
    metric = metric or value_distance
    points = list(scales) if scales is not None else list(schedule)
    values = []
    for eps in points:
        try:
            values.append(f(eps))
        except (NgdefError, ValueError, ArithmeticError) as e:
            raise DomainExhausted(eps, e) from e
    residuals = [float(metric(later, earlier)) for earlier, later in zip(values, values[1:])]
    order = fit_order(residuals, schedule.base)

    value, extrapolated = values[-1], False
    ratios = _tail_ratios(residuals)
    if extrapolate and ratios is not None and is_numeric(value):
        rho = float(np.median(ratios))
        if 0.0 < rho < 1.0 and np.all(np.abs(ratios - rho) <= RATIO_SPREAD * rho):
            last, previous = np.asarray(values[-1], dtype=float), np.asarray(values[-2], dtype=float)
            value = last + rho / (1.0 - rho) * (last - previous)
            if np.ndim(value) == 0:
                value = float(value)
            extrapolated = True

    estimate = LimitEstimate(value, values, residuals, order, True, schedule, extrapolated, list(schedule))
    if residuals and not residuals[-1] <= tol:
        estimate.converged = False
        raise NotConverging(estimate, f"final residual {residuals[-1]:.3g} exceeds tolerance {tol:.3g}")
    estimate.converged = order is None or order > 0
    logger.debug(f"limit estimate: final residual {estimate.final_residual:.3g}, order {order}")
    return estimate


def uniform_residuals(net: Callable[[Any, Any], Arrow], limit: Callable[[Any], Arrow], samples: Iterable[Any],
                      scales: Sequence[Any], groupoid: NormedGroupoid,
                      mode: ConvergenceMode = ConvergenceMode.RIGHT) -> List[float]:
    """
    Supremum over samples of the distance from ``net(eps, s)`` to ``limit(s)`` at each scale.

    Right mode measures ``d(f_eps inv(f))``, left mode ``d(inv(f_eps) f)``.
    """
    samples = list(samples)
    mode = ConvergenceMode(mode)
    limits = [limit(s) for s in samples]
    sup = []
    for eps in scales:
        worst = 0.0
        for s, a in zip(samples, limits):
            a_eps = net(eps, s)
            if mode is ConvergenceMode.LEFT:
                worst = max(worst, groupoid.norm(groupoid.compose(groupoid.inverse(a_eps), a)))
            else:
                worst = max(worst, groupoid.norm(groupoid.compose(a_eps, groupoid.inverse(a))))
        sup.append(worst)
    return sup


def check_uniform_convergence(net: Callable[[Any, Any], Arrow], limit: Callable[[Any], Arrow],
                              samples: Iterable[Any], scales: Sequence[Any], groupoid: NormedGroupoid,
                              tol: float = 1e-6, mode: ConvergenceMode = ConvergenceMode.RIGHT) -> ConvergenceTrace:
    """
    Uniform convergence of an arrow-valued net on a sampled bounded set.

    Accepts when the supremum residuals end below ``tol`` and stop increasing.
    """
    residuals = uniform_residuals(net, limit, samples, scales, groupoid, mode)
    return ConvergenceTrace(accept_residuals(residuals, tol), residuals, ConvergenceMode(mode))
