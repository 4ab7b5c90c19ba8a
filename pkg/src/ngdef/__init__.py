"""
ngdef - Deformations of normed groupoids and their tangent structures.

This package provides normed groupoids and their deformations, the
approximate operations and irq laws derived from them, limit estimation of
tangent structures on concrete models, and an experiment CLI that checks
every identity on seeded samples.
"""

from .deformation import Deformation, DyadicScaling, PositiveReals, ScalingGroup
from .errors import NgdefError
from .groupoid import Arrow, Groupoid, GroupoidMorphism, NormedGroupoid
from .irq import DilatationIrq, FiniteIrq, Irq, from_dilatation
from .main import __version__, main
from .models import build_model, default_model_registry

__all__ = [
    "Arrow",
    "Deformation",
    "DilatationIrq",
    "DyadicScaling",
    "FiniteIrq",
    "Groupoid",
    "GroupoidMorphism",
    "Irq",
    "NgdefError",
    "NormedGroupoid",
    "PositiveReals",
    "ScalingGroup",
    "build_model",
    "default_model_registry",
    "from_dilatation",
    "main",
]
