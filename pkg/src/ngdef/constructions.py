"""Standard normed groupoids built from simpler data.

- the trivial (pair) groupoid over a metric space, and its variant over a
  group with a homogeneous gauge, which stores arrows as group offsets;
- the alpha-double groupoid of same-source pairs;
- action groupoids of group actions, normed when the action is free;
- the correspondence between norms and right-invariant fiber-distance
  families.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import FiberMismatch, InvalidModelSpec, NotFree, RightInvarianceViolated, Unsupported
from .groupoid import ATOL, Arrow, Groupoid, GroupoidMorphism, NormedGroupoid, relative_gap

logger = logging.getLogger('ngdef')


# ---------------------------------------------------------------------------
# Metric spaces and trivial groupoids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricSpaceModel:
    """
    A metric space given by its distance and a bounded-set sampler.

    Either ``sampler`` (continuous spaces) or ``points`` (finite spaces) must
    be supplied.
    """

    name: str
    distance: Callable[[Any, Any], float]
    sampler: Optional[Callable[[np.random.Generator, Any, float], Any]] = None
    points: Optional[Sequence[Any]] = None

    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        if self.points is not None:
            return self.points[int(rng.integers(len(self.points)))]
        if self.sampler is None:
            raise Unsupported(f"metric space {self.name} has no sampler")
        return self.sampler(rng, center, radius)

    def violation(self, rng: np.random.Generator, count: int = 200, radius: float = 1.0) -> Tuple[float, Any]:
        """
        Largest violation of the metric axioms on sampled triples.

        Distinct points at distance zero count as a violation of 1.

        Returns:
            Tuple of (violation, witness triple)
        """
        worst, witness = 0.0, None
        for _ in range(count):
            x, y, z = (self.sample(rng, None, radius) for _ in range(3))
            dxy, dyx, dxz, dyz = self.distance(x, y), self.distance(y, x), self.distance(x, z), self.distance(y, z)
            value = max(
                abs(self.distance(x, x)),
                abs(dxy - dyx),
                max(0.0, dxz - dxy - dyz) / (1.0 + dxy + dyz),
                0.0 if dxy >= 0 else -dxy,
                1.0 if dxy <= ATOL and not _same_point(x, y) else 0.0,
            )
            if value > worst:
                worst, witness = value, (x, y, z)
        return worst, witness


def _same_point(x: Any, y: Any) -> bool:
    try:
        a, b = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    except (TypeError, ValueError):
        return x == y
    return a.shape == b.shape and bool(np.array_equal(a, b))


class TrivialGroupoid(NormedGroupoid):
    """
    Pair groupoid ``X x X`` over a metric space.

    The arrow ``(x, y)`` goes from ``y`` to ``x``: ``alpha(x, y) = y``,
    ``omega(x, y) = x``, ``(x, y)(y, z) = (x, z)`` and ``d((x, y)) = d(x, y)``.
    """

    separable = True

    def __init__(self, space: MetricSpaceModel):
        self.space = space
        self.name = f"trivial({space.name})"

    def pair(self, x: Any, y: Any) -> Arrow:
        """The arrow ``(x, y)`` from ``y`` to ``x``."""
        return Arrow(y, x)

    def as_pair(self, g: Arrow) -> Tuple[Any, Any]:
        return g.target, g.source

    def identity(self, x: Any) -> Arrow:
        return Arrow(x, x)

    def _multiply(self, g: Arrow, h: Arrow) -> Arrow:
        return Arrow(h.source, g.target)

    def inverse(self, g: Arrow) -> Arrow:
        return Arrow(g.target, g.source)

    def norm(self, g: Arrow) -> float:
        return float(self.space.distance(g.target, g.source))

    def object_distance(self, x: Any, y: Any) -> float:
        # the only arrow from x to y is (y, x)
        return self.norm(self.pair(y, x))

    def arrow_between(self, target: Any, source: Any) -> Arrow:
        return self.pair(target, source)

    def solve_simple(self, a_k: Arrow, a: Arrow) -> Tuple[Arrow, Arrow]:
        # h a_k g = a with h = (x, x_k) and g = (y_k, y)
        return self.pair(a.target, a_k.target), self.pair(a_k.source, a.source)

    @property
    def is_finite(self) -> bool:
        return self.space.points is not None

    def objects(self) -> List[Any]:
        if self.space.points is None:
            return super().objects()
        return list(self.space.points)

    def arrows(self) -> List[Arrow]:
        return [self.pair(x, y) for x, y in product(self.objects(), repeat=2)]

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self.space.sample(rng, center, radius)

    def sample_fiber(self, rng: np.random.Generator, x: Any, radius: float = 1.0) -> Arrow:
        return self.pair(self.space.sample(rng, x, radius), x)


def trivial_groupoid(space: MetricSpaceModel) -> TrivialGroupoid:
    """Normed trivial groupoid over a metric space."""
    return TrivialGroupoid(space)


class HomogeneousGroup(ABC):
    """
    A group with a one-parameter family of dilation automorphisms and a
    homogeneous gauge ``|delta_t w| = t |w|``.

    The left-invariant distance is ``d(x, y) = |x^{-1} y|``.
    """

    name: str = "group"
    dim: int = 1

    @abstractmethod
    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def inverse(self, a: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def dilate(self, scale: float, a: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def gauge(self, a: np.ndarray) -> float:
        pass

    @property
    def neutral(self) -> np.ndarray:
        return np.zeros(self.dim)

    def coerce(self, point: Any) -> np.ndarray:
        """
        Convert user input into a group element.

        Raises:
            ValueError: If the input does not have ``dim`` coordinates
        """
        arr = np.atleast_1d(np.asarray(point, dtype=float))
        if arr.shape != (self.dim,):
            raise ValueError(f"{self.name} expects {self.dim} coordinates, got {arr.shape[0]}")
        return arr

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        return self.gauge(self.multiply(self.inverse(x), y))

    def dilatation(self, scale: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Based dilatation ``delta^x_scale y = x delta_scale(x^{-1} y)``."""
        return self.multiply(x, self.dilate(scale, self.multiply(self.inverse(x), y)))

    def random_ball(self, rng: np.random.Generator, radius: float) -> np.ndarray:
        """Element of gauge at most ``radius``."""
        raw = rng.uniform(-1.0, 1.0, size=self.dim)
        size = self.gauge(raw)
        if size == 0.0:
            return self.neutral
        return self.dilate(radius * float(rng.uniform()) / size, raw)


class HomogeneousGroupoid(NormedGroupoid):
    """
    Trivial groupoid over a homogeneous group, with arrows stored as offsets.

    The arrow ``(x, y)`` is kept as its source ``y`` and offset ``w = y^{-1} x``,
    so products, inverses and dilations act on offsets only and never cancel
    large base points against each other.
    """

    separable = True

    def __init__(self, group: HomogeneousGroup):
        self.group = group
        self.name = f"trivial({group.name})"

    def pair(self, x: Any, y: Any) -> Arrow:
        """The arrow ``(x, y)`` from ``y`` to ``x``."""
        x, y = self.group.coerce(x), self.group.coerce(y)
        return Arrow(y, x, self.group.multiply(self.group.inverse(y), x))

    def as_pair(self, g: Arrow) -> Tuple[np.ndarray, np.ndarray]:
        return g.target, g.source

    def identity(self, x: Any) -> Arrow:
        x = self.group.coerce(x)
        return Arrow(x, x, self.group.neutral)

    def _multiply(self, g: Arrow, h: Arrow) -> Arrow:
        return Arrow(h.source, g.target, self.group.multiply(h.payload, g.payload))

    def inverse(self, g: Arrow) -> Arrow:
        return Arrow(g.target, g.source, self.group.inverse(g.payload))

    def norm(self, g: Arrow) -> float:
        return float(self.group.gauge(g.payload))

    def object_distance(self, x: Any, y: Any) -> float:
        return self.norm(self.pair(y, x))

    def arrow_between(self, target: Any, source: Any) -> Arrow:
        return self.pair(target, source)

    def with_offset(self, x: Any, w: np.ndarray) -> Arrow:
        """Fiber arrow over ``x`` with offset ``w``."""
        x = self.group.coerce(x)
        return Arrow(x, self.group.multiply(x, w), np.asarray(w, dtype=float))

    def solve_simple(self, a_k: Arrow, a: Arrow) -> Tuple[Arrow, Arrow]:
        return self.pair(a.target, a_k.target), self.pair(a_k.source, a.source)

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> np.ndarray:
        base = self.group.neutral if center is None else self.group.coerce(center)
        return self.group.multiply(base, self.group.random_ball(rng, radius))

    def sample_fiber(self, rng: np.random.Generator, x: Any, radius: float = 1.0) -> Arrow:
        return self.with_offset(x, self.group.random_ball(rng, radius))


# ---------------------------------------------------------------------------
# Alpha-double groupoid
# ---------------------------------------------------------------------------

class AlphaDoubleGroupoid(NormedGroupoid):
    """
    Groupoid of same-source pairs ``(g, h)`` of a normed groupoid.

    Objects are the arrows of the base (the pair ``(g, g)`` is identified
    with ``g``); ``(g, h)`` goes from ``h`` to ``g``, composes as
    ``(g, h)(h, l) = (g, l)`` and has norm ``d(g h^{-1})``.
    """

    def __init__(self, base: NormedGroupoid):
        self.base = base
        self.name = f"alpha-double({base.name})"
        self.separable = base.separable

    def pair(self, g: Arrow, h: Arrow) -> Arrow:
        """
        The arrow ``(g, h)``.

        Raises:
            FiberMismatch: If ``alpha(g) != alpha(h)``
        """
        if not self.base.same_object(self.base.alpha(g), self.base.alpha(h)):
            raise FiberMismatch(g, h)
        return Arrow(h, g)

    def object_gap(self, x: Arrow, y: Arrow) -> float:
        return self.base.arrow_gap(x, y)

    def payload_gap(self, p: Any, q: Any) -> float:
        return 0.0

    def identity(self, g: Arrow) -> Arrow:
        return Arrow(g, g)

    def _multiply(self, p: Arrow, q: Arrow) -> Arrow:
        return Arrow(q.source, p.target)

    def inverse(self, p: Arrow) -> Arrow:
        return Arrow(p.target, p.source)

    def norm(self, p: Arrow) -> float:
        return self.base.fiber_distance(p.target, p.source)

    def dif_morphism(self) -> GroupoidMorphism:
        """``dif`` as a norm-preserving morphism to the base groupoid."""
        base = self.base
        return GroupoidMorphism("dif", self, base, base.omega, lambda p: base.dif(p.target, p.source), isometry=True)

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite

    def objects(self) -> List[Arrow]:
        return self.base.arrows()

    def arrows(self) -> List[Arrow]:
        arrows = self.base.arrows()
        return [Arrow(h, g) for g, h in product(arrows, repeat=2)
                if self.base.same_object(g.source, h.source)]

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Arrow:
        return self.base.sample_fiber(rng, self.base.sample_object(rng, center, radius), radius)

    def sample_fiber(self, rng: np.random.Generator, g: Arrow, radius: float = 1.0) -> Arrow:
        return Arrow(g, self.base.sample_fiber(rng, self.base.alpha(g), radius))


def alpha_double(ng: NormedGroupoid) -> AlphaDoubleGroupoid:
    """Alpha-double groupoid of a normed groupoid."""
    return AlphaDoubleGroupoid(ng)


# ---------------------------------------------------------------------------
# Action groupoids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupActionModel:
    """A left group action on a space, with a distance on points."""

    name: str
    multiply: Callable[[Any, Any], Any]
    inverse: Callable[[Any], Any]
    neutral: Any
    act: Callable[[Any, Any], Any]
    distance: Callable[[Any, Any], float]
    free: bool
    sample_element: Callable[[np.random.Generator, float], Any]
    sample_point: Callable[[np.random.Generator, Any, float], Any]
    solve: Optional[Callable[[Any, Any], Any]] = None

    def violation(self, rng: np.random.Generator, count: int = 200, radius: float = 1.0) -> Tuple[float, Any]:
        """
        Largest violation of ``(gh)(x) = g(h(x))``, ``e(x) = x`` and, for free
        actions, ``g(x) = x => g = e`` on samples.
        """
        worst, witness = 0.0, None
        for _ in range(count):
            g, h = self.sample_element(rng, radius), self.sample_element(rng, radius)
            x = self.sample_point(rng, None, radius)
            value = max(
                relative_gap(self.act(self.multiply(g, h), x), self.act(g, self.act(h, x))),
                relative_gap(self.act(self.neutral, x), x),
            )
            if self.free and relative_gap(self.act(g, x), x) <= ATOL:
                value = max(value, relative_gap(g, self.neutral))
            if value > worst:
                worst, witness = value, (g, h, x)
        return worst, witness


class ActionGroupoid(Groupoid):
    """
    Action groupoid ``X x G`` of a left action.

    The arrow ``(x, g)`` goes from ``x`` to ``g(x)`` and composes as
    ``(g(x), h)(x, g) = (x, hg)``.
    """

    def __init__(self, action: GroupActionModel):
        self.action = action
        self.name = f"action({action.name})"

    def arrow(self, x: Any, g: Any) -> Arrow:
        """The arrow ``(x, g)``."""
        return Arrow(x, self.action.act(g, x), g)

    def identity(self, x: Any) -> Arrow:
        return Arrow(x, x, self.action.neutral)

    def _multiply(self, p: Arrow, q: Arrow) -> Arrow:
        return Arrow(q.source, p.target, self.action.multiply(p.payload, q.payload))

    def inverse(self, p: Arrow) -> Arrow:
        return Arrow(p.target, p.source, self.action.inverse(p.payload))

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self.action.sample_point(rng, center, radius)

    def sample_fiber(self, rng: np.random.Generator, x: Any, radius: float = 1.0) -> Arrow:
        return self.arrow(x, self.action.sample_element(rng, radius))


class NormedActionGroupoid(ActionGroupoid, NormedGroupoid):
    """Action groupoid of a free action, normed by ``d(x, g) = d'(g(x), x)``."""

    def __init__(self, action: GroupActionModel):
        if not action.free:
            raise NotFree(f"action {action.name} is not free; its action groupoid carries no norm")
        super().__init__(action)

    def norm(self, p: Arrow) -> float:
        return float(self.action.distance(p.target, p.source))

    def arrow_between(self, target: Any, source: Any) -> Arrow:
        if self.action.solve is None:
            raise Unsupported(f"{self.name} cannot solve g(x) = y")
        return self.arrow(source, self.action.solve(source, target))

    def action_fiber_distance(self, p: Arrow, q: Arrow) -> float:
        """``d_x(g, h) = d(h(x), g h^{-1})`` for ``p = (x, g)`` and ``q = (x, h)``."""
        if not self.same_object(p.source, q.source):
            raise FiberMismatch(p, q)
        element = self.action.multiply(p.payload, self.action.inverse(q.payload))
        return self.norm(self.arrow(q.target, element))


def action_groupoid(action: GroupActionModel) -> NormedActionGroupoid:
    """
    Normed action groupoid of a free action.

    Raises:
        NotFree: If the action is not declared free
    """
    return NormedActionGroupoid(action)


# ---------------------------------------------------------------------------
# Norms and right-invariant fiber-distance families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberDistanceFamily:
    """A distance ``d_x`` on every fiber ``alpha^{-1}(x)``."""

    distance: Callable[[Any, Arrow, Arrow], float]
    name: str = "fiber-distances"

    def at(self, x: Any) -> Callable[[Arrow, Arrow], float]:
        return lambda g, h: self.distance(x, g, h)

    def __call__(self, g: Arrow, h: Arrow) -> float:
        return self.distance(g.source, g, h)


class FiberDistanceGroupoid(NormedGroupoid):
    """A groupoid normed by ``d(g) = d_{alpha(g)}(g, e(alpha(g)))``."""

    def __init__(self, groupoid: Groupoid, family: FiberDistanceFamily):
        self.groupoid = groupoid
        self.family = family
        self.name = f"{groupoid.name}[{family.name}]"
        self.separable = getattr(groupoid, "separable", True)

    def norm(self, g: Arrow) -> float:
        x = self.groupoid.alpha(g)
        return float(self.family.distance(x, g, self.groupoid.identity(x)))

    def identity(self, x: Any) -> Arrow:
        return self.groupoid.identity(x)

    def _multiply(self, g: Arrow, h: Arrow) -> Arrow:
        return self.groupoid._multiply(g, h)

    def inverse(self, g: Arrow) -> Arrow:
        return self.groupoid.inverse(g)

    def object_gap(self, x: Any, y: Any) -> float:
        return self.groupoid.object_gap(x, y)

    def payload_gap(self, p: Any, q: Any) -> float:
        return self.groupoid.payload_gap(p, q)

    @property
    def is_finite(self) -> bool:
        return self.groupoid.is_finite

    def objects(self) -> List[Any]:
        return self.groupoid.objects()

    def arrows(self) -> List[Arrow]:
        return self.groupoid.arrows()

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self.groupoid.sample_object(rng, center, radius)

    def sample_fiber(self, rng: np.random.Generator, x: Any, radius: float = 1.0) -> Arrow:
        return self.groupoid.sample_fiber(rng, x, radius)


def invariance_triples(groupoid: Groupoid, samples: int = 500, seed: int = 0,
                       radius: float = 1.0) -> Iterator[Tuple[Arrow, Arrow, Arrow]]:
    """
    Triples ``(g, h, u)`` with ``alpha(g) = alpha(h) = omega(u)``.

    Finite groupoids are enumerated exhaustively; others are sampled.
    """
    if groupoid.is_finite:
        arrows = groupoid.arrows()
        for u in arrows:
            fiber = [g for g in arrows if groupoid.same_object(g.source, u.target)]
            for g, h in product(fiber, repeat=2):
                yield g, h, u
        return
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        u = groupoid.sample_fiber(rng, groupoid.sample_object(rng, None, radius), radius)
        x = groupoid.omega(u)
        yield groupoid.sample_fiber(rng, x, radius), groupoid.sample_fiber(rng, x, radius), u


def right_invariance_violation(groupoid: Groupoid, family: FiberDistanceFamily,
                               triples: Iterator[Tuple[Arrow, Arrow, Arrow]]) -> Tuple[float, Any]:
    """Largest relative violation of ``d_{omega(u)}(g, h) = d_{alpha(u)}(gu, hu)``."""
    worst, witness = 0.0, None
    for g, h, u in triples:
        lhs = family.distance(groupoid.omega(u), g, h)
        rhs = family.distance(groupoid.alpha(u), groupoid.compose(g, u), groupoid.compose(h, u))
        value = abs(lhs - rhs) / (1.0 + max(abs(lhs), abs(rhs)))
        if value > worst:
            worst, witness = value, (g, h, u)
    return worst, witness


def norm_from_fiber_distances(groupoid: Groupoid, family: FiberDistanceFamily, samples: int = 500,
                              seed: int = 0, tol: float = ATOL) -> FiberDistanceGroupoid:
    """
    Norm a groupoid from a right-invariant family of fiber distances.

    Args:
        groupoid: Bare groupoid
        family: Fiber distances ``d_x``
        samples: Number of sampled triples for infinite groupoids
        seed: Sampling seed
        tol: Tolerance on the relative right-invariance violation

    Returns:
        The normed groupoid with ``d(g) = d_{alpha(g)}(g, e(alpha(g)))``

    Raises:
        RightInvarianceViolated: With the worst triple when invariance fails
    """
    violation, witness = right_invariance_violation(groupoid, family, invariance_triples(groupoid, samples, seed))
    if violation > tol:
        g, h, u = witness
        raise RightInvarianceViolated(g, h, u, violation)
    logger.debug(f"right invariance holds on {groupoid.name} (worst {violation:.3g})")
    return FiberDistanceGroupoid(groupoid, family)


def fiber_distances_from_norm(ng: NormedGroupoid) -> FiberDistanceFamily:
    """The family ``d_x(g, h) = d(g h^{-1})`` of a normed groupoid."""
    return FiberDistanceFamily(lambda x, g, h: ng.fiber_distance(g, h), name=f"fibers({ng.name})")


def validate_metric_space(space: MetricSpaceModel, rng: np.random.Generator, count: int = 200,
                          tol: float = ATOL) -> None:
    """
    Raises:
        InvalidModelSpec: If the metric axioms fail on samples
    """
    violation, witness = space.violation(rng, count)
    if violation > tol:
        raise InvalidModelSpec(f"{space.name} is not a metric space: violation {violation:.3g} at {witness!r}")
