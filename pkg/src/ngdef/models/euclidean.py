"""Euclidean space with homotheties."""

from typing import Any, List

import numpy as np

from ..constructions import HomogeneousGroup, HomogeneousGroupoid, MetricSpaceModel
from ..groupoid import Arrow, GroupoidMorphism
from .base import Model, ModelBundle, positive_dim
from .lift import HomogeneousDeformation, MetricDilatationStructure


class EuclideanGroup(HomogeneousGroup):
    """``R^n`` under addition with ``delta_t w = t w`` and the Euclidean norm."""

    def __init__(self, dim: int = 1):
        self.dim = dim
        self.name = f"R^{dim}"

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a + b

    def inverse(self, a: np.ndarray) -> np.ndarray:
        return -a

    def dilate(self, scale: float, a: np.ndarray) -> np.ndarray:
        return scale * a

    def gauge(self, a: np.ndarray) -> float:
        return float(np.linalg.norm(a))


def euclidean_space(dim: int) -> MetricSpaceModel:
    group = EuclideanGroup(dim)

    def sampler(rng: np.random.Generator, center: Any, radius: float) -> np.ndarray:
        base = group.neutral if center is None else group.coerce(center)
        return base + group.random_ball(rng, radius)

    return MetricSpaceModel(group.name, group.distance, sampler=sampler)


def euclidean_dilatation_structure(dim: int) -> MetricDilatationStructure:
    """Homotheties ``delta^x_eps y = x + eps (y - x)``."""
    group = EuclideanGroup(dim)
    return MetricDilatationStructure(f"homotheties({group.name})", euclidean_space(dim), group.dilatation)


def coordinate_projections(groupoid: HomogeneousGroupoid) -> List[GroupoidMorphism]:
    """Morphisms ``(p, q) -> (p_i, q_i)`` onto the trivial groupoid of the real line."""
    line = HomogeneousGroupoid(EuclideanGroup(1))
    morphisms = []
    for i in range(groupoid.group.dim):
        def on_objects(x: Any, i: int = i) -> np.ndarray:
            return np.asarray(x, dtype=float)[i:i + 1]

        def on_arrows(g: Arrow, i: int = i) -> Arrow:
            return Arrow(g.source[i:i + 1], g.target[i:i + 1], g.payload[i:i + 1])

        morphisms.append(GroupoidMorphism(f"coordinate-{i}", groupoid, line, on_objects, on_arrows))
    return morphisms


class EuclideanModel(Model):
    """Trivial groupoid over ``R^n`` with the lifted homothety deformation."""

    parameter = "dim"

    @property
    def name(self) -> str:
        return "euclidean"

    @property
    def description(self) -> str:
        return "R^n with Euclidean distance and homotheties (parameter: dimension)"

    def validate_params(self, params):
        super().validate_params(params)
        positive_dim(params)

    def build(self, **params: Any) -> ModelBundle:
        dim = positive_dim(params)
        group = EuclideanGroup(dim)
        groupoid = HomogeneousGroupoid(group)
        return ModelBundle(
            name=f"euclidean({dim})",
            groupoid=groupoid,
            deformation=HomogeneousDeformation(groupoid),
            morphisms=coordinate_projections(groupoid),
            parse_object=group.coerce,
            default_object=group.neutral,
            params={"dim": dim},
        )
