"""Deliberately faulty models that exercise the failure paths of the checks."""

from typing import Any

from ..constructions import HomogeneousGroupoid
from ..groupoid import Arrow
from .base import Model, ModelBundle, positive_dim
from .euclidean import EuclideanGroup
from .lift import HomogeneousDeformation


class FrozenHalfDeformation(HomogeneousDeformation):
    """
    Homotheties on fibers over ``x_0 < 0`` and the identity on fibers over ``x_0 >= 0``.

    Every map is globally defined. The frozen fibers never contract, so
    rescaled distances there diverge as ``eps -> 0``.
    """

    def __init__(self, groupoid: HomogeneousGroupoid):
        super().__init__(groupoid)
        self.name = f"frozen-half({groupoid.group.name})"

    def _apply(self, scale: float, g: Arrow) -> Arrow:
        if g.source[0] >= 0:
            return g
        return super()._apply(scale, g)


class SquaredNormGroupoid(HomogeneousGroupoid):
    """Euclidean trivial groupoid normed by the squared distance, which is not subadditive."""

    def norm(self, g: Arrow) -> float:
        return float(self.group.gauge(g.payload)) ** 2


class BrokenEuclideanModel(Model):
    parameter = "dim"

    @property
    def name(self) -> str:
        return "broken-euclidean"

    @property
    def description(self) -> str:
        return "R^n whose deformation freezes the fibers over x_0 >= 0 (parameter: dimension)"

    def validate_params(self, params):
        super().validate_params(params)
        positive_dim(params)

    def build(self, **params: Any) -> ModelBundle:
        dim = positive_dim(params)
        group = EuclideanGroup(dim)
        groupoid = HomogeneousGroupoid(group)
        return ModelBundle(
            name=f"broken-euclidean({dim})",
            groupoid=groupoid,
            deformation=FrozenHalfDeformation(groupoid),
            parse_object=group.coerce,
            default_object=group.neutral,
            params={"dim": dim},
        )


class DefectiveNormModel(Model):
    parameter = "dim"

    @property
    def name(self) -> str:
        return "defective-norm"

    @property
    def description(self) -> str:
        return "R^n normed by the squared distance (parameter: dimension)"

    def validate_params(self, params):
        super().validate_params(params)
        positive_dim(params)

    def build(self, **params: Any) -> ModelBundle:
        dim = positive_dim(params)
        group = EuclideanGroup(dim)
        groupoid = SquaredNormGroupoid(group)
        groupoid.name = f"squared({group.name})"
        return ModelBundle(
            name=f"defective-norm({dim})",
            groupoid=groupoid,
            deformation=HomogeneousDeformation(groupoid),
            parse_object=group.coerce,
            default_object=group.neutral,
            params={"dim": dim},
        )
