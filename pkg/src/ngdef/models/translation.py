"""Translation action groupoid of ``R^n`` on itself."""

from typing import Any

import numpy as np

from ..constructions import GroupActionModel, HomogeneousGroupoid, NormedActionGroupoid, action_groupoid
from ..deformation import Deformation
from ..groupoid import Arrow, GroupoidMorphism
from .base import Model, ModelBundle, positive_dim
from .euclidean import EuclideanGroup


def translation_action(dim: int) -> GroupActionModel:
    """``R^n`` acting on ``R^n`` by ``t(x) = x + t``."""
    group = EuclideanGroup(dim)

    def sample_point(rng: np.random.Generator, center: Any, radius: float) -> np.ndarray:
        base = group.neutral if center is None else group.coerce(center)
        return base + group.random_ball(rng, radius)

    return GroupActionModel(
        name=f"translations({group.name})",
        multiply=group.multiply,
        inverse=group.inverse,
        neutral=group.neutral,
        act=lambda t, x: x + t,
        distance=group.distance,
        free=True,
        sample_element=group.random_ball,
        sample_point=sample_point,
        solve=lambda x, y: y - x,
    )


def translation_isomorphism(groupoid: NormedActionGroupoid, dim: int) -> GroupoidMorphism:
    """``(x, t) -> (x + t, x)``, an isometry onto the trivial groupoid of ``R^n`` that commutes with scaling."""
    trivial = HomogeneousGroupoid(EuclideanGroup(dim))
    return GroupoidMorphism("translation-to-pairs", groupoid, trivial, lambda x: x,
                            lambda p: trivial.with_offset(p.source, p.payload), isometry=True)


class ActionDeformation(Deformation):
    """``delta_eps(x, t) = (x, eps t)``."""

    def __init__(self, groupoid: NormedActionGroupoid, **kwargs: Any):
        super().__init__(groupoid, **kwargs)
        self.name = f"scaling({groupoid.name})"

    def _apply(self, scale: float, p: Arrow) -> Arrow:
        return self.groupoid.arrow(p.source, scale * p.payload)


class TranslationActionModel(Model):
    """Normed action groupoid of translations with scaled translation vectors."""

    parameter = "dim"

    @property
    def name(self) -> str:
        return "translation-action"

    @property
    def description(self) -> str:
        return "R^n acting on itself by translations (parameter: dimension)"

    def validate_params(self, params):
        super().validate_params(params)
        positive_dim(params)

    def build(self, **params: Any) -> ModelBundle:
        dim = positive_dim(params)
        groupoid = action_groupoid(translation_action(dim))
        group = EuclideanGroup(dim)
        return ModelBundle(
            name=f"translation-action({dim})",
            groupoid=groupoid,
            deformation=ActionDeformation(groupoid),
            morphisms=[translation_isomorphism(groupoid, dim)],
            parse_object=group.coerce,
            default_object=group.neutral,
            params={"dim": dim},
        )
