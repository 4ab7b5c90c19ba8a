"""The Heisenberg group with anisotropic dilations and the Koranyi gauge.

Group law ``(a, b, c)(a', b', c') = (a + a', b + b', c + c' + (a b' - a' b) / 2)``,
dilations ``delta_t(a, b, c) = (t a, t b, t^2 c)`` and gauge
``|(a, b, c)| = ((a^2 + b^2)^2 + 16 c^2)^{1/4}``.
"""

from typing import Any, List

import numpy as np

from ..constructions import HomogeneousGroup, HomogeneousGroupoid
from ..groupoid import Arrow, GroupoidMorphism
from .base import Model, ModelBundle
from .euclidean import EuclideanGroup
from .lift import HomogeneousDeformation


class HeisenbergGroup(HomogeneousGroup):
    """First Heisenberg group in exponential coordinates."""

    name = "H1"
    dim = 3

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        a, b, c = x
        a2, b2, c2 = y
        return np.array([a + a2, b + b2, c + c2 + 0.5 * (a * b2 - a2 * b)])

    def inverse(self, x: np.ndarray) -> np.ndarray:
        return -np.asarray(x, dtype=float)

    def dilate(self, scale: float, x: np.ndarray) -> np.ndarray:
        return np.array([scale * x[0], scale * x[1], scale * scale * x[2]])

    def gauge(self, x: np.ndarray) -> float:
        a, b, c = x
        return float(((a * a + b * b) ** 2 + 16.0 * c * c) ** 0.25)


def horizontal_projection(groupoid: HomogeneousGroupoid) -> List[GroupoidMorphism]:
    """The abelianization ``(a, b, c) -> (a, b)`` as a morphism onto the trivial groupoid of ``R^2``."""
    plane = HomogeneousGroupoid(EuclideanGroup(2))

    def on_arrows(g: Arrow) -> Arrow:
        return Arrow(g.source[:2], g.target[:2], g.payload[:2])

    return [GroupoidMorphism("horizontal", groupoid, plane, lambda x: np.asarray(x, dtype=float)[:2], on_arrows)]


class HeisenbergModel(Model):
    """Trivial groupoid over the Heisenberg group with lifted Carnot dilatations."""

    @property
    def name(self) -> str:
        return "heisenberg"

    @property
    def description(self) -> str:
        return "Heisenberg group with Koranyi distance and anisotropic dilations"

    def build(self, **params: Any) -> ModelBundle:
        group = HeisenbergGroup()
        groupoid = HomogeneousGroupoid(group)
        return ModelBundle(
            name="heisenberg",
            groupoid=groupoid,
            deformation=HomogeneousDeformation(groupoid),
            morphisms=horizontal_projection(groupoid),
            parse_object=group.coerce,
            default_object=group.neutral,
        )
