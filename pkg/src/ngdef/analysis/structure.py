"""Tangent structures of a deformation.

The rescaled norms ``d(delta_eps g) / |eps|`` and distances
``d(dif(delta_eps g, delta_eps h)) / |eps|`` of a contracting deformation
may converge as ``eps -> 0``; so may the approximate operations. This
module estimates those limits, checks the cone identity, classifies a
deformation as strong (``gs``), weak (``gw``) or neither, and extracts the
dilatation structure of a single fiber.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..constructions import MetricSpaceModel
from ..deformation import Deformation
from ..errors import FiberMismatch, NgdefError, NotConverging, NotGw, Unsupported
from ..groupoid import Arrow, ConvergenceMode
from ..models.lift import MetricDilatationStructure
from ..models.sampling import BoundedSampler
from .estimate import EpsSchedule, LimitEstimate, estimate_limit, fit_order
from .reports import CheckReport, ViolationTracker

logger = logging.getLogger('ngdef')

# Bound on d_bar / d over fiber samples for the two distances to define the same uniformity.
RATIO_BOUND = 16.0

# Radius of sampled arrows for limit checks; keeps every net inside its domain.
LIMIT_RADIUS = 1.0

# Slowest accepted decay of simple-convergence residuals, as a power of eps.
MIN_SIMPLE_ORDER = 0.25


class TangentOp(str, Enum):
    """Operations whose eps -> 0 limits define the tangent structure."""

    SUM = "sum"
    DIFF = "diff"
    INV = "inv"
    DILATATION = "dilatation"

    @property
    def arity(self) -> int:
        return 1 if self is TangentOp.INV else 2


class Verdict(str, Enum):
    STRONG = "gs"
    WEAK = "gw"
    NEITHER = "neither"


def _rescaled(deformation: Deformation, measure: Callable[[Any], float]) -> Callable[[Any], float]:
    modulus = deformation.gamma.modulus
    return lambda eps: measure(eps) / modulus(eps)


def _recentred(deformation: Deformation, base: Arrow, arrows: Sequence[Arrow]) -> Tuple[Arrow, List[Arrow]]:
    """
    Move a based net to the identity of ``omega(base)`` by right translation with ``base^{-1}``.

    ``delta^{h k}_eps (g k) = (delta^h_eps g) k`` for every composable ``k``,
    so a net based at ``base`` is the net based at the identity, composed
    with ``base``. Evaluated at the identity, offsets shrink with ``eps``
    instead of cancelling against the offset of ``base``.

    Raises:
        FiberMismatch: If an arrow is not in the fiber of ``base``
    """
    G = deformation.groupoid
    shift = G.inverse(base)
    for a in arrows:
        if not G.same_object(G.alpha(a), G.alpha(base)):
            raise FiberMismatch(a, base)
    return G.identity(G.omega(base)), [G.compose(a, shift) for a in arrows]


def tangent_distance(deformation: Deformation, g: Arrow, h: Arrow, schedule: EpsSchedule,
                     tol: float = 1e-6, base: Optional[Arrow] = None) -> LimitEstimate:
    """
    Estimate ``d_bar(g, h) = lim d(dif(delta_eps g, delta_eps h)) / |eps|``.

    With ``base`` the dilatations ``delta^base_eps`` replace ``delta_eps``,
    which gives the tangent distance at ``base`` of the fiber.

    Raises:
        FiberMismatch: If ``g`` and ``h`` have different sources
        DomainExhausted: If a rescaled arrow leaves its domain
        NotConverging: If the rescaled distances do not settle within ``tol``
    """
    G = deformation.groupoid
    if not G.same_object(G.alpha(g), G.alpha(h)):
        raise FiberMismatch(g, h)
    if base is None:
        move = deformation.deform
    else:
        centre, (g, h) = _recentred(deformation, base, (g, h))
        move = lambda eps, a: deformation.dilatation(eps, centre, a)  # noqa: E731
    net = _rescaled(deformation, lambda eps: G.fiber_distance(move(eps, g), move(eps, h)))
    return estimate_limit(net, schedule, tol=tol, scales=schedule.scales(deformation.gamma))


def tangent_norm(deformation: Deformation, g: Arrow, schedule: EpsSchedule, tol: float = 1e-6) -> LimitEstimate:
    """
    Estimate ``d_bar(g) = lim d(delta_eps g) / |eps|``.

    Raises:
        DomainExhausted: If ``g`` leaves the domain of some ``delta_eps``
        NotConverging: If the rescaled norms do not settle within ``tol``
    """
    G = deformation.groupoid
    net = _rescaled(deformation, lambda eps: G.norm(deformation.deform(eps, g)))
    return estimate_limit(net, schedule, tol=tol, scales=schedule.scales(deformation.gamma))


def tangent_op(deformation: Deformation, kind: Union[TangentOp, str], base: Arrow, args: Sequence[Arrow],
               schedule: EpsSchedule, mu: Any = 0.5, tol: float = 1e-6) -> LimitEstimate:
    """
    Estimate a tangent operation as the limit of the based approximate operations.

    Args:
        deformation: Deformation
        kind: ``sum``, ``diff``, ``inv`` or ``dilatation``
        base: Base arrow ``u`` (``x`` for the limit dilatation)
        args: One arrow for ``inv``, two otherwise, all in the fiber of ``base``
        schedule: Geometric schedule
        mu: Scale of the limit dilatation, as an element of the scaling group
        tol: Tolerance on the final residual

    Returns:
        Estimate whose values are the coordinates of the resulting arrows

    Raises:
        ValueError: If the number of arguments does not match the operation
        DomainExhausted: If an intermediate arrow leaves its domain
        NotConverging: If the net does not settle within ``tol``
    """
    kind = TangentOp(kind)
    if len(args) != kind.arity:
        raise ValueError(f"tangent {kind.value} takes {kind.arity} arguments, got {len(args)}")
    d, G = deformation, deformation.groupoid
    centre, args = _recentred(deformation, base, args)
    nets = {
        TangentOp.SUM: lambda eps: d.based_sum(eps, centre, args[0], args[-1]),
        TangentOp.DIFF: lambda eps: d.based_diff(eps, centre, args[0], args[-1]),
        TangentOp.INV: lambda eps: d.based_inv(eps, centre, args[0]),
        TangentOp.DILATATION: lambda eps: d.limit_dilatation_net(eps, mu, centre, args[0], args[-1]),
    }
    net = nets[kind]
    return estimate_limit(lambda eps: G.coordinates(G.compose(net(eps), base)), schedule, tol=tol,
                          scales=schedule.scales(deformation.gamma))


def tangent_difference(deformation: Deformation, g: Arrow, h: Arrow, schedule: EpsSchedule,
                       tol: float = 1e-6) -> LimitEstimate:
    """Estimate ``Delta(g, h) = lim Delta_eps(g, h)`` in coordinates."""
    G = deformation.groupoid
    return estimate_limit(lambda eps: G.coordinates(deformation.approx_diff(eps, g, h)), schedule, tol=tol,
                          scales=schedule.scales(deformation.gamma))


def _guarded(tracker: ViolationTracker, witness: Any, estimate: Callable[[], LimitEstimate]) -> Optional[LimitEstimate]:
    """Run an estimate; record a failed one as a violation and return None."""
    try:
        return estimate()
    except NotConverging as e:
        tracker.add(e.estimate.final_residual, {"sample": witness, "error": str(e)})
    except (NgdefError, ValueError, ArithmeticError) as e:
        tracker.add(float("inf"), {"sample": witness, "error": str(e)})
    return None


def check_cone(deformation: Deformation, x: Any, u: Arrow, v: Arrow, mu: Any, schedule: EpsSchedule,
               tol: float = 1e-6) -> CheckReport:
    """
    Check the cone identities at the object ``x``.

    ``d_bar(delta_mu u, delta_mu v) = |mu| d_bar(u, v)`` and the limit dilatation
    based at ``e(x), e(x)`` equals ``delta^{e(x)}_mu``.

    Raises:
        ValueError: If ``|mu| >= 1``
    """
    gamma, G = deformation.gamma, deformation.groupoid
    scale = gamma.modulus(mu)
    if not scale < 1.0:
        raise ValueError(f"cone identity needs |mu| < 1, got {scale}")
    e = G.identity(x)
    tracker = ViolationTracker()
    witness = {"x": x, "u": u, "v": v, "mu": scale}

    scaled = _guarded(tracker, witness, lambda: tangent_distance(
        deformation, deformation.dilatation(mu, e, u), deformation.dilatation(mu, e, v), schedule, tol))
    plain = _guarded(tracker, witness, lambda: tangent_distance(deformation, u, v, schedule, tol))
    if scaled is not None and plain is not None:
        tracker.add(abs(scaled.value - scale * plain.value), {"identity": "scaled-distance", **witness})

    limit = _guarded(tracker, witness, lambda: tangent_op(deformation, TangentOp.DILATATION, e, (e, v),
                                                          schedule, mu, tol))
    if limit is not None:
        direct = G.coordinates(deformation.dilatation(mu, e, v))
        tracker.add(float(np.max(np.abs(np.asarray(limit.value) - direct))),
                    {"identity": "limit-dilatation-at-base", **witness})
    return tracker.report("cone", deformation.name, 0, tol, schedule=schedule.to_dict())


def _fiber_samples(deformation: Deformation, sampler: BoundedSampler, size: int) -> List[Tuple[Arrow, ...]]:
    return list(sampler.with_radius(min(sampler.radius, LIMIT_RADIUS)).fiber_tuples(deformation.groupoid, size))


def _tangent_distance_report(deformation, samples, schedule, tol, model, seed) -> CheckReport:
    G = deformation.groupoid
    tracker = ViolationTracker()
    for g, h, l in samples:
        witness = (g, h, l)
        estimates = [_guarded(tracker, witness, lambda a=a, b=b: tangent_distance(deformation, a, b, schedule, tol))
                     for a, b in ((g, h), (h, g), (h, l), (g, l), (g, g))]
        if any(e is None for e in estimates):
            continue
        gh, hg, hl, gl, gg = (e.value for e in estimates)
        tracker.add(abs(gh - hg), {"property": "symmetry", "sample": witness})
        tracker.add(max(0.0, gl - gh - hl), {"property": "triangle", "sample": witness})
        tracker.add(abs(gg), {"property": "diagonal", "sample": witness})
        if (gh <= tol) != (G.fiber_distance(g, h) <= tol):
            tracker.add(float("inf"), {"property": "vanishing", "sample": witness, "tangent": gh})
    return tracker.report("tangent-distance", model, seed, tol, schedule=schedule.to_dict())


def _limit_dilatation_report(deformation, samples, schedule, tol, model, seed, mu=0.5) -> CheckReport:
    mu = deformation.gamma.from_modulus(mu)
    tracker = ViolationTracker()
    for x, u, v in samples:
        estimate = _guarded(tracker, (x, u, v),
                            lambda: tangent_op(deformation, TangentOp.DILATATION, x, (u, v), schedule, mu, tol))
        if estimate is not None:
            tracker.add(estimate.final_residual, {"sample": (x, u, v)})
    return tracker.report("limit-dilatation", model, seed, tol, schedule=schedule.to_dict())


def _tangent_norm_report(deformation, samples, schedule, tol, model, seed) -> CheckReport:
    """Tangent norms converge, vanish only on identities and bound the tangent distance of a pair."""
    G = deformation.groupoid
    tracker = ViolationTracker()
    for g, h, _ in samples:
        norms = []
        for arrow in (g, h, G.identity(G.alpha(g))):
            estimate = _guarded(tracker, arrow, lambda a=arrow: tangent_norm(deformation, a, schedule, tol))
            norms.append(None if estimate is None else estimate.value)
            if estimate is None:
                continue
            tracker.add(estimate.final_residual, {"sample": arrow})
            if estimate.value <= tol and not G.is_identity(arrow):
                tracker.add(float("inf"), {"property": "vanishing", "sample": arrow, "tangent": estimate.value})
        if norms[0] is not None and norms[1] is not None:
            distance = _guarded(tracker, (g, h), lambda: tangent_distance(deformation, g, h, schedule, tol))
            if distance is not None:
                tracker.add(max(0.0, distance.value - norms[0] - norms[1]),
                            {"property": "distance-below-norms", "sample": (g, h)})
    return tracker.report("tangent-norm", model, seed, tol, schedule=schedule.to_dict())


def _tangent_difference_report(deformation, samples, schedule, tol, model, seed) -> CheckReport:
    tracker = ViolationTracker()
    for g, h, _ in samples:
        estimate = _guarded(tracker, (g, h), lambda: tangent_difference(deformation, g, h, schedule, tol))
        if estimate is not None:
            tracker.add(estimate.final_residual, {"sample": (g, h)})
    return tracker.report("tangent-difference", model, seed, tol, schedule=schedule.to_dict())


def _norm_consistency_report(deformation, samples, schedule, tol, model, seed) -> CheckReport:
    """
    Rescaled distances agree with rescaled norms of the deformed difference,
    at every scale and in the limit ``d_bar(g, h) = d_bar(Delta(g, h))``.
    """
    G = deformation.groupoid
    tracker = ViolationTracker()
    skipped = None
    for g, h, _ in samples:
        witness = (g, h)
        try:
            for eps in schedule.scales(deformation.gamma):
                lhs = G.fiber_distance(deformation.deform(eps, g), deformation.deform(eps, h))
                rhs = G.norm(deformation.deform(eps, deformation.induce(eps).dif(g, h)))
                scale = deformation.gamma.modulus(eps)
                tracker.add(abs(lhs - rhs) / scale / (1.0 + lhs / scale), {"identity": "per-scale", "sample": witness})
        except (NgdefError, ValueError, ArithmeticError) as e:
            tracker.add(float("inf"), {"identity": "per-scale", "sample": witness, "error": str(e)})
            continue
        distance = _guarded(tracker, witness, lambda: tangent_distance(deformation, g, h, schedule, tol))
        difference = _guarded(tracker, witness, lambda: tangent_difference(deformation, g, h, schedule, tol))
        if distance is None or difference is None:
            continue
        try:
            limit_arrow = G.arrow_between(difference.value, G.alpha(g))
        except Unsupported as e:
            skipped = str(e)
            continue
        norm = _guarded(tracker, witness, lambda: tangent_norm(deformation, limit_arrow, schedule, tol))
        if norm is not None:
            tracker.add(abs(distance.value - norm.value), {"identity": "limit", "sample": witness})
    report = tracker.report("norm-consistency", model, seed, tol, schedule=schedule.to_dict())
    if skipped:
        report.details["limit-identity-skipped"] = skipped
    return report


def _simple_difference_report(deformation, samples, schedule, tol, model, seed) -> Optional[CheckReport]:
    """
    ``dif_eps(g, h)`` converges simply to ``Delta(g, h)``.

    Simple residuals of a Carnot gauge decay like a power of ``eps`` below
    one, so the check accepts residual traces that stop increasing and decay
    with order at least ``MIN_SIMPLE_ORDER``; exact traces pass outright.

    Returns:
        The report, or None when the model cannot solve for simple convergence
    """
    G = deformation.groupoid
    tracker = ViolationTracker()
    scales = schedule.scales(deformation.gamma)
    orders = []
    for g, h, _ in samples:
        difference = _guarded(tracker, (g, h), lambda: tangent_difference(deformation, g, h, schedule, tol))
        if difference is None:
            continue
        try:
            limit_arrow = G.arrow_between(difference.value, G.alpha(g))
            sequence = [deformation.induce(eps).dif(g, h) for eps in scales]
            trace = G.converges_to(sequence, limit_arrow, ConvergenceMode.SIMPLE, tol)
        except Unsupported:
            return None
        except (NgdefError, ValueError, ArithmeticError) as e:
            tracker.add(float("inf"), {"sample": (g, h), "error": str(e)})
            continue
        order = fit_order(trace.residuals, schedule.base)
        if order is None:
            tracker.add(trace.final, {"sample": (g, h)})
            continue
        orders.append(order)
        tail = trace.residuals[-(len(trace.residuals) // 4 + 1):]
        growth = max(later - earlier for earlier, later in zip(tail, tail[1:]))
        if order < MIN_SIMPLE_ORDER or growth > tol:
            tracker.add(float("inf"), {"sample": (g, h), "order": order, "final": trace.final})
    report = tracker.report("simple-difference", model, seed, tol, schedule=schedule.to_dict())
    if orders:
        report.details["order_range"] = [min(orders), max(orders)]
    return report


STRONG_CHECKS = ("tangent-norm", "tangent-difference", "norm-consistency", "simple-difference")
WEAK_CHECKS = ("tangent-distance", "limit-dilatation")


def classify_structure(deformation: Deformation, sampler: BoundedSampler, schedule: EpsSchedule,
                       tol: float = 1e-6, model: Optional[str] = None) -> Tuple[Verdict, List[CheckReport]]:
    """
    Classify a deformation from sampled limit estimates.

    The weak structure needs converging tangent distances and limit
    dilatations; the strong one additionally needs converging tangent norms
    and differences whose limits satisfy ``d_bar(g, h) = d_bar(Delta(g, h))``,
    and simple convergence of ``dif_eps`` when the model can measure it.

    Args:
        deformation: Deformation that already passes the exact deformation suites
        sampler: Source of sampled fiber triples; its count bounds the work
        schedule: Geometric schedule
        tol: Tolerance of every limit check
        model: Name recorded in the reports

    Returns:
        Tuple of (verdict, reports); failing reports carry their witnesses
    """
    model = model or deformation.name
    samples = _fiber_samples(deformation, sampler, 3)
    seed = sampler.seed
    logger.info(f"Classifying {model} on {len(samples)} sampled fiber triples")
    reports = [
        _tangent_distance_report(deformation, samples, schedule, tol, model, seed),
        _limit_dilatation_report(deformation, samples, schedule, tol, model, seed),
        _tangent_norm_report(deformation, samples, schedule, tol, model, seed),
        _tangent_difference_report(deformation, samples, schedule, tol, model, seed),
        _norm_consistency_report(deformation, samples, schedule, tol, model, seed),
    ]
    simple = _simple_difference_report(deformation, samples, schedule, tol, model, seed)
    if simple is not None:
        reports.append(simple)
    for report in reports:
        report.sampler = sampler.to_dict()

    passed = {r.check for r in reports if r.passed}
    weak = all(check in passed for check in WEAK_CHECKS)
    strong = weak and all(r.passed for r in reports if r.check in STRONG_CHECKS)
    verdict = Verdict.STRONG if strong else Verdict.WEAK if weak else Verdict.NEITHER
    logger.info(f"{model}: verdict {verdict.value}")
    return verdict, reports


# ---------------------------------------------------------------------------
# Dilatation structure of one fiber
# ---------------------------------------------------------------------------

FIBER_CHECKS = ("semigroup", "contraction", "tangent-distance", "limit-dilatation")


@dataclass
class FiberDilatationStructure:
    """
    The fiber over ``x`` with the distance ``d(g h^{-1})`` and the dilatations
    ``delta^g_eps h = delta_eps(h g^{-1}) g``.
    """

    deformation: Deformation
    x: Any
    reports: List[CheckReport] = field(default_factory=list)

    def dilatation(self, eps: Any, g: Arrow, h: Arrow) -> Arrow:
        return self.deformation.dilatation(eps, g, h)

    def distance(self, g: Arrow, h: Arrow) -> float:
        return self.deformation.groupoid.fiber_distance(g, h)

    def point(self, p: Any) -> Arrow:
        """The fiber arrow from ``x`` to ``p``."""
        return self.deformation.groupoid.arrow_between(p, self.x)

    def point_dilatation(self, scale: float, p: Any, q: Any) -> np.ndarray:
        """``delta^p_scale q`` read on the targets of fiber arrows."""
        G = self.deformation.groupoid
        eps = self.deformation.gamma.from_modulus(scale)
        return G.coordinates(self.dilatation(eps, self.point(p), self.point(q)))

    def to_metric_structure(self) -> MetricDilatationStructure:
        """The fiber as a dilatation structure on the metric space of arrow targets."""
        G = self.deformation.groupoid

        def sampler(rng: np.random.Generator, center: Any, radius: float) -> np.ndarray:
            g = G.sample_fiber(rng, self.x, radius)
            if center is not None:
                g = G.compose(G.sample_fiber(rng, G.omega(g), radius), g)
            return G.coordinates(g)

        space = MetricSpaceModel(f"fiber({self.deformation.name}, {self.x!r})",
                                 lambda p, q: self.distance(self.point(p), self.point(q)), sampler=sampler)
        return MetricDilatationStructure(f"fiber-dilatations({self.deformation.name})", space, self.point_dilatation)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _fiber_semigroup_report(deformation, x, samples, rng, tol, model, seed) -> CheckReport:
    gamma = deformation.gamma
    tracker = ViolationTracker()
    for g, h, _ in samples:
        eps, mu = gamma.sample(rng), gamma.sample(rng)
        G = deformation.groupoid
        try:
            lhs = deformation.dilatation(eps, g, deformation.dilatation(mu, g, h))
            rhs = deformation.dilatation(gamma.product(eps, mu), g, h)
            tracker.add(G.arrow_gap(lhs, rhs), {"law": "semigroup", "sample": (g, h), "scales": (eps, mu)})
            tracker.add(G.arrow_gap(deformation.dilatation(eps, g, g), g), {"law": "fixes-base", "sample": g})
            tracker.add(G.arrow_gap(deformation.dilatation(gamma.neutral, g, h), h), {"law": "unit", "sample": (g, h)})
        except (NgdefError, ValueError) as e:
            tracker.add(float("inf"), {"sample": (g, h), "error": str(e)})
    return tracker.report("semigroup", model, seed, tol)


def _fiber_contraction_report(deformation, x, samples, schedule, tol, model, seed) -> CheckReport:
    """``d(g, delta^g_eps h)`` decreases along the schedule and ends below ``B |eps|``."""
    G = deformation.groupoid
    bound = deformation.domain_witness().B
    scales = schedule.scales(deformation.gamma)
    tracker = ViolationTracker()
    for g, h, _ in samples:
        try:
            radii = [G.fiber_distance(deformation.dilatation(eps, g, h), g) for eps in scales]
        except (NgdefError, ValueError) as e:
            tracker.add(float("inf"), {"sample": (g, h), "error": str(e)})
            continue
        growth = max((later - earlier for earlier, later in zip(radii, radii[1:])), default=0.0)
        excess = radii[-1] - bound * deformation.gamma.modulus(scales[-1])
        tracker.add(max(0.0, growth, excess), {"sample": (g, h), "final": radii[-1]})
    return tracker.report("contraction", model, seed, tol, schedule=schedule.to_dict())


def _fiber_tangent_distance_report(deformation, x, samples, schedule, tol, model, seed) -> CheckReport:
    """Tangent distances at sampled base points converge and define the uniformity of the fiber distance."""
    G = deformation.groupoid
    tracker = ViolationTracker()
    ratios = []
    for base, u, v in samples:
        estimate = _guarded(tracker, (base, u, v),
                            lambda: tangent_distance(deformation, u, v, schedule, tol, base=base))
        if estimate is None:
            continue
        tracker.add(estimate.final_residual, {"sample": (base, u, v)})
        plain = G.fiber_distance(u, v)
        if (estimate.value <= tol) != (plain <= tol):
            tracker.add(float("inf"), {"property": "vanishing", "sample": (base, u, v)})
        elif plain > tol:
            ratio = estimate.value / plain
            ratios.append(ratio)
            if not 1.0 / RATIO_BOUND <= ratio <= RATIO_BOUND:
                tracker.add(float("inf"), {"property": "uniformity", "sample": (base, u, v), "ratio": ratio})
    report = tracker.report("tangent-distance", model, seed, tol, schedule=schedule.to_dict())
    if ratios:
        report.details["ratio_range"] = [min(ratios), max(ratios)]
    return report


def _fiber_limit_dilatation_report(deformation, x, samples, schedule, tol, model, seed, mu=0.5) -> CheckReport:
    """Limit dilatations exist, and at ``u = base`` they equal the plain dilatation."""
    G = deformation.groupoid
    mu = deformation.gamma.from_modulus(mu)
    tracker = ViolationTracker()
    for base, u, v in samples:
        for first in (u, base):
            estimate = _guarded(tracker, (base, first, v), lambda first=first: tangent_op(
                deformation, TangentOp.DILATATION, base, (first, v), schedule, mu, tol))
            if estimate is None:
                continue
            tracker.add(estimate.final_residual, {"sample": (base, first, v)})
            if first is base:
                direct = G.coordinates(deformation.dilatation(mu, base, v))
                tracker.add(float(np.max(np.abs(np.asarray(estimate.value) - direct))),
                            {"identity": "limit-at-base", "sample": (base, v)})
    return tracker.report("limit-dilatation", model, seed, tol, schedule=schedule.to_dict())


def fiber_dilatation_structure(deformation: Deformation, x: Any, sampler: BoundedSampler,
                               schedule: EpsSchedule, tol: float = 1e-9, limit_tol: float = 1e-6,
                               checks: Optional[Iterable[str]] = None,
                               model: Optional[str] = None) -> FiberDilatationStructure:
    """
    Extract the dilatation structure of the fiber over ``x`` and check its axioms.

    Args:
        deformation: Deformation of a normed groupoid
        x: Object whose fiber is extracted
        sampler: Fiber samples are drawn with its seed, radius and count
        schedule: Geometric schedule for the limit checks
        tol: Tolerance of the exact checks
        limit_tol: Tolerance of the limit checks
        checks: Subset of ``semigroup``, ``contraction``, ``tangent-distance`` and ``limit-dilatation``
        model: Name recorded in the reports

    Returns:
        The fiber structure with its passing reports

    Raises:
        ValueError: For an unknown check name
        NotGw: If any check fails; the exception carries every report
    """
    selected = tuple(FIBER_CHECKS if checks is None else checks)
    unknown = set(selected) - set(FIBER_CHECKS)
    if unknown:
        raise ValueError(f"unknown fiber checks {sorted(unknown)}; available: {', '.join(FIBER_CHECKS)}")
    model = model or deformation.name
    G = deformation.groupoid
    rng = sampler.rng()
    radius = min(sampler.radius, LIMIT_RADIUS)
    samples = [tuple(G.sample_fiber(rng, x, radius) for _ in range(3)) for _ in range(sampler.count)]
    seed = sampler.seed

    builders = {
        "semigroup": lambda: _fiber_semigroup_report(deformation, x, samples, rng, tol, model, seed),
        "contraction": lambda: _fiber_contraction_report(deformation, x, samples, schedule, limit_tol, model, seed),
        "tangent-distance": lambda: _fiber_tangent_distance_report(deformation, x, samples, schedule, limit_tol,
                                                                   model, seed),
        "limit-dilatation": lambda: _fiber_limit_dilatation_report(deformation, x, samples, schedule, limit_tol,
                                                                   model, seed),
    }
    reports = []
    for name in FIBER_CHECKS:
        if name in selected:
            report = builders[name]()
            report.sampler = {**sampler.to_dict(), "center": None}
            report.details["object"] = x
            reports.append(report)
    structure = FiberDilatationStructure(deformation, x, reports)
    if not structure.passed:
        failed = ", ".join(r.check for r in reports if not r.passed)
        raise NotGw(reports, f"fiber over {x!r} is not a dilatation structure: {failed} failed")
    logger.info(f"Fiber over {x!r} of {model} passes {', '.join(r.check for r in reports)}")
    return structure
