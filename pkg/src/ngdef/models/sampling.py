"""Deterministic bounded-set samplers."""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..errors import InvalidSampler
from ..groupoid import Arrow, Groupoid, describe

logger = logging.getLogger('ngdef')


@dataclass(frozen=True)
class BoundedSampler:
    """
    Seeded generator of objects and arrows in a ball.

    Every stream restarts from ``numpy.random.default_rng(seed)``, so two
    streams drawn with the same sampler are identical.
    """

    center: Any = None
    radius: float = 1.0
    seed: int = 0
    count: int = 1000

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidSampler(f"sampler radius must be positive, got {self.radius}")
        if int(self.count) < 1:
            raise InvalidSampler(f"sampler count must be at least 1, got {self.count}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def with_count(self, count: int) -> "BoundedSampler":
        return BoundedSampler(self.center, self.radius, self.seed, count)

    def with_radius(self, radius: float) -> "BoundedSampler":
        return BoundedSampler(self.center, radius, self.seed, self.count)

    def objects(self, groupoid: Groupoid) -> Iterator[Any]:
        rng = self.rng()
        for _ in range(self.count):
            yield groupoid.sample_object(rng, self.center, self.radius)

    def arrows(self, groupoid: Groupoid) -> Iterator[Arrow]:
        """Arrows with sources in the ball and norms at most ``radius``."""
        rng = self.rng()
        for _ in range(self.count):
            x = groupoid.sample_object(rng, self.center, self.radius)
            yield groupoid.sample_fiber(rng, x, self.radius)

    def fiber_tuples(self, groupoid: Groupoid, size: int) -> Iterator[Tuple[Arrow, ...]]:
        """Tuples of ``size`` arrows sharing a sampled source."""
        rng = self.rng()
        for _ in range(self.count):
            x = groupoid.sample_object(rng, self.center, self.radius)
            yield tuple(groupoid.sample_fiber(rng, x, self.radius) for _ in range(size))

    def pairs(self, groupoid: Groupoid) -> Iterator[Tuple[Arrow, Arrow]]:
        """Composable pairs ``(g, h)``."""
        rng = self.rng()
        for _ in range(self.count):
            yield groupoid.sample_pair(rng, self.center, self.radius)

    def triples(self, groupoid: Groupoid) -> Iterator[Tuple[Arrow, Arrow, Arrow]]:
        """Composable triples ``(g, h, k)``."""
        rng = self.rng()
        for _ in range(self.count):
            yield groupoid.sample_triple(rng, self.center, self.radius)

    def to_dict(self) -> Dict[str, Any]:
        return {"center": describe(self.center), "radius": self.radius, "seed": self.seed, "count": self.count}


def sample_bounded(sampler: BoundedSampler, groupoid: Optional[Groupoid] = None, dim: int = 1) -> List[Any]:
    """
    Draw ``sampler.count`` points.

    With a groupoid the points are its objects; without one they are
    uniform points of the Euclidean ball of dimension ``dim``.
    """
    if groupoid is not None:
        return list(sampler.objects(groupoid))
    rng = sampler.rng()
    center = np.zeros(dim) if sampler.center is None else np.atleast_1d(np.asarray(sampler.center, dtype=float))
    directions = rng.normal(size=(sampler.count, dim))
    lengths = np.linalg.norm(directions, axis=1, keepdims=True)
    lengths[lengths == 0.0] = 1.0
    radii = sampler.radius * rng.uniform(size=(sampler.count, 1)) ** (1.0 / dim)
    return list(center + directions / lengths * radii)

