"""Check suites for ngdef."""

from .base import CheckSuite, SuiteKind
from .deformation import (ApproximateOperationsSuite, DeformationActionSuite, DeformationContractionSuite,
                          DeformationDomainsSuite, DeformationMorphismsSuite, DoubleDeformationSuite,
                          InducedStructuresSuite)
from .groupoid import (ActionGroupoidSuite, AlphaDoubleSuite, GroupoidAxiomsSuite, LimitUniquenessSuite,
                       NormAxiomsSuite, RightInvarianceSuite, SeminormFamilySuite)
from .irq import IrqLawsSuite
from .registry import SuiteRegistry, run_check_suite
from .tangent import ConeSuite, FiberSuite, StructureSuite

BUILTIN_SUITES = (
    GroupoidAxiomsSuite,
    NormAxiomsSuite,
    LimitUniquenessSuite,
    SeminormFamilySuite,
    AlphaDoubleSuite,
    RightInvarianceSuite,
    ActionGroupoidSuite,
    DeformationActionSuite,
    DeformationContractionSuite,
    DeformationDomainsSuite,
    DoubleDeformationSuite,
    DeformationMorphismsSuite,
    InducedStructuresSuite,
    ApproximateOperationsSuite,
    IrqLawsSuite,
    ConeSuite,
    StructureSuite,
    FiberSuite,
)


def default_suite_registry() -> SuiteRegistry:
    """Registry holding every built-in suite, in the order ``verify`` runs them."""
    registry = SuiteRegistry()
    for suite_class in BUILTIN_SUITES:
        registry.register(suite_class)
    return registry


__all__ = [
    "ActionGroupoidSuite",
    "AlphaDoubleSuite",
    "ApproximateOperationsSuite",
    "BUILTIN_SUITES",
    "CheckSuite",
    "ConeSuite",
    "DeformationActionSuite",
    "DeformationContractionSuite",
    "DeformationDomainsSuite",
    "DeformationMorphismsSuite",
    "DoubleDeformationSuite",
    "FiberSuite",
    "GroupoidAxiomsSuite",
    "InducedStructuresSuite",
    "IrqLawsSuite",
    "LimitUniquenessSuite",
    "NormAxiomsSuite",
    "RightInvarianceSuite",
    "SeminormFamilySuite",
    "StructureSuite",
    "SuiteKind",
    "SuiteRegistry",
    "default_suite_registry",
    "run_check_suite",
]
