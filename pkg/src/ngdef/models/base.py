"""Base model interface for ngdef."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

from ..deformation import Deformation
from ..errors import InvalidModelSpec, Unsupported
from ..groupoid import GroupoidMorphism, NormedGroupoid
from ..irq import DilatationIrq, Irq, from_dilatation

logger = logging.getLogger('ngdef')


@dataclass
class ModelBundle:
    """
    Everything a named model provides.

    A continuous model carries a normed groupoid and usually a deformation;
    a finite irq document carries only ``irq``.
    """

    name: str
    groupoid: Optional[NormedGroupoid] = None
    deformation: Optional[Deformation] = None
    irq: Optional[Irq] = None
    morphisms: Sequence[GroupoidMorphism] = ()
    parse_object: Callable[[Any], Any] = field(default=lambda value: value)
    default_object: Any = None
    params: Dict[str, Any] = field(default_factory=dict)

    def require_groupoid(self) -> NormedGroupoid:
        if self.groupoid is None:
            raise Unsupported(f"model {self.name} has no groupoid")
        return self.groupoid

    def require_deformation(self) -> Deformation:
        if self.deformation is None:
            raise Unsupported(f"model {self.name} has no deformation")
        return self.deformation

    def fiber_irq(self, x: Any = None) -> DilatationIrq:
        """Gamma-irq of dilatations on the fiber over ``x`` (default object when omitted)."""
        return from_dilatation(self.require_deformation(), self.default_object if x is None else x)

    def object(self, value: Any) -> Any:
        """
        Parse a user-supplied object.

        Raises:
            InvalidModelSpec: If the value is not an object of this model
        """
        if value is None:
            return self.default_object
        try:
            return self.parse_object(value)
        except (ValueError, TypeError, KeyError) as e:
            raise InvalidModelSpec(f"{value!r} is not an object of {self.name}: {e}")


class Model(ABC):
    """
    Abstract base class for models.

    A model is a named recipe that builds a :class:`ModelBundle` from its
    parameters. Its ``parameter`` names the value written between
    parentheses in a model spec such as ``euclidean(2)``.
    """

    parameter: Optional[str] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """
        Return the model name.

        This name is used in model specs and CLI commands.
        """
        pass

    @property
    def description(self) -> str:
        return f"{self.name} model"

    @abstractmethod
    def build(self, **params: Any) -> ModelBundle:
        """
        Build the model.

        Raises:
            InvalidModelSpec: If the parameters are invalid
        """
        pass

    def validate_params(self, params: Dict[str, Any]) -> None:
        """
        Validate model parameters.

        Override this method to add custom validation logic.

        Raises:
            InvalidModelSpec: If the parameters are invalid
        """
        unknown = set(params) - ({self.parameter} if self.parameter else set())
        if unknown:
            raise InvalidModelSpec(f"model {self.name} does not take parameters {sorted(unknown)}")


def positive_dim(params: Dict[str, Any], default: int = 1) -> int:
    """Read a dimension parameter."""
    raw = params.get("dim", default)
    try:
        dim = int(raw)
    except (TypeError, ValueError):
        raise InvalidModelSpec(f"dimension must be an integer, got {raw!r}")
    if dim < 1 or dim != float(raw):
        raise InvalidModelSpec(f"dimension must be a positive integer, got {raw!r}")
    return dim
