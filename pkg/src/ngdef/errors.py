"""Exception hierarchy for ngdef.

Every error derives from :class:`NgdefError` and from the builtin exception a
caller would naturally expect, so ``except ValueError`` keeps working for bad
inputs and ``except RuntimeError`` for failed computations.
"""

from typing import Any, Optional, Sequence


class NgdefError(Exception):
    """Base class for all ngdef errors."""


class NotComposable(NgdefError, ValueError):
    """Raised when ``compose(g, h)`` is called with ``omega(h) != alpha(g)``."""

    def __init__(self, g: Any, h: Any):
        self.g = g
        self.h = h
        super().__init__(f"arrows are not composable: target of {h!r} differs from source of {g!r}")


class NotComposableInduced(NotComposable):
    """Raised when the induced composition ``m_mu`` is undefined for a pair."""

    def __init__(self, g: Any, h: Any, mu: Any):
        self.mu = mu
        NgdefError.__init__(self, f"pair not composable in the structure induced at mu={mu}: ({g!r}, {h!r})")
        self.g = g
        self.h = h


class FiberMismatch(NgdefError, ValueError):
    """Raised when two arrows were expected to share their source."""

    def __init__(self, g: Any, h: Any):
        self.g = g
        self.h = h
        super().__init__(f"arrows lie in different fibers: {g!r} and {h!r}")


class Unsupported(NgdefError, NotImplementedError):
    """Raised when a model cannot provide the requested operation."""


class NotAMorphism(NgdefError, ValueError):
    """Raised when a map violates the groupoid morphism laws on a sample."""

    def __init__(self, name: str, witness: Any, violation: float):
        self.name = name
        self.witness = witness
        self.violation = violation
        super().__init__(f"map '{name}' is not a groupoid morphism (violation {violation:.3g}) at {witness!r}")


class NotSeparating(NotAMorphism):
    """Raised when no member of a morphism family moves a non-identity arrow."""

    def __init__(self, witness: Any):
        NgdefError.__init__(self, f"morphism family sends a non-identity arrow to identities only: {witness!r}")
        self.name = "family"
        self.witness = witness
        self.violation = float("inf")


class NotFree(NgdefError, ValueError):
    """Raised when a norm is requested for a group action that is not free."""


class RightInvarianceViolated(NgdefError, ValueError):
    """Raised when a fiber-distance family is not right invariant."""

    def __init__(self, g: Any, h: Any, u: Any, violation: float):
        self.g = g
        self.h = h
        self.u = u
        self.violation = violation
        super().__init__(
            f"right invariance fails by {violation:.3g} on the triple g={g!r}, h={h!r}, u={u!r}"
        )


class NotInDomain(NgdefError, ValueError):
    """Raised when an arrow lies outside the domain of a deformation map."""

    def __init__(self, eps: Any, arrow: Any, excess: Optional[float] = None):
        self.eps = eps
        self.arrow = arrow
        self.excess = excess
        detail = f" (outside by {excess:.3g})" if excess is not None else ""
        super().__init__(f"arrow {arrow!r} is not in dom({eps}){detail}")


class ZeroIndex(NgdefError, ValueError):
    """Raised when an irq iterate is requested with index zero."""


class InvalidModelSpec(NgdefError, ValueError):
    """Raised when a model name, its parameters or a model document are invalid."""


class InvalidSampler(NgdefError, ValueError):
    """Raised for sampler parameters outside their admissible range."""


class AxiomViolation(NgdefError, RuntimeError):
    """Raised when an input structure fails one of its axioms on a sample."""

    def __init__(self, axiom: str, witness: Any, violation: float = float("nan")):
        self.axiom = axiom
        self.witness = witness
        self.violation = violation
        super().__init__(f"axiom {axiom} fails (violation {violation:.3g}) at {witness!r}")


class DomainExhausted(NgdefError, RuntimeError):
    """Raised when a limit estimate cannot evaluate its net at some scale."""

    def __init__(self, eps: Any, cause: BaseException):
        self.eps = eps
        self.cause = cause
        super().__init__(f"evaluation failed at eps={eps}: {cause}")


class NotConverging(NgdefError, RuntimeError):
    """Raised when residuals of a limit estimate stay above tolerance."""

    def __init__(self, estimate: Any, message: str = ""):
        self.estimate = estimate
        super().__init__(message or "net does not converge within tolerance")


class NotGw(NgdefError, RuntimeError):
    """Raised when a deformation fails the weak tangent-structure axioms."""

    def __init__(self, reports: Sequence[Any], message: str = ""):
        self.reports = list(reports)
        super().__init__(message or "deformation is not a groupoid weak delta-structure")


class UnknownSuite(NgdefError, ValueError):
    """Raised for a check suite id that is not registered."""


class ConfigError(NgdefError, ValueError):
    """Raised for invalid experiment configuration."""
