"""Concrete models for ngdef."""

from .base import Model, ModelBundle
from .euclidean import EuclideanGroup, EuclideanModel, euclidean_dilatation_structure, euclidean_space
from .faulty import BrokenEuclideanModel, DefectiveNormModel
from .finite import FiniteGroupoid, FiniteModel, fixture_path
from .heisenberg import HeisenbergGroup, HeisenbergModel
from .lift import (HomogeneousDeformation, LiftedDeformation, MetricDilatationStructure,
                   lift_dilatation_structure)
from .registry import ModelRegistry, build_model, parse_model_spec
from .sampling import BoundedSampler, sample_bounded
from .translation import (ActionDeformation, TranslationActionModel, translation_action,
                          translation_isomorphism)


def default_model_registry() -> ModelRegistry:
    """Registry holding every built-in model."""
    registry = ModelRegistry()
    for model_class in (EuclideanModel, HeisenbergModel, TranslationActionModel, FiniteModel,
                        BrokenEuclideanModel, DefectiveNormModel):
        registry.register(model_class)
    return registry


__all__ = [
    "ActionDeformation",
    "BoundedSampler",
    "BrokenEuclideanModel",
    "DefectiveNormModel",
    "EuclideanGroup",
    "EuclideanModel",
    "FiniteGroupoid",
    "FiniteModel",
    "HeisenbergGroup",
    "HeisenbergModel",
    "HomogeneousDeformation",
    "LiftedDeformation",
    "MetricDilatationStructure",
    "Model",
    "ModelBundle",
    "ModelRegistry",
    "TranslationActionModel",
    "build_model",
    "default_model_registry",
    "euclidean_dilatation_structure",
    "euclidean_space",
    "fixture_path",
    "lift_dilatation_structure",
    "parse_model_spec",
    "sample_bounded",
    "translation_action",
    "translation_isomorphism",
]
