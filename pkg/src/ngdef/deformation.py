"""Deformations of normed groupoids.

A deformation is a family ``eps -> delta_eps`` indexed by a commutative
scaling group, with ``alpha o delta_eps = alpha``, ``delta_eps delta_mu =
delta_{eps mu}``, ``delta_e = id`` and ``delta_eps(e(x)) = e(x)``, contracting
arrows as ``|eps| -> 0``. Maps are only defined on domains ``dom(eps)``;
built-in deformations use norm balls ``{g : |eps| d(g) <= B}``.

From a deformation we derive the dilatations ``delta^h_eps g = delta_eps(g h^{-1}) h``,
the deformation of the alpha-double groupoid, induced structures at a scale
``mu`` and the approximate difference, sum and inverse operations.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Tuple

import numpy as np

from .constructions import AlphaDoubleGroupoid
from .errors import FiberMismatch, InvalidModelSpec, NotComposableInduced, NotInDomain
from .groupoid import ATOL, Arrow, GroupoidMorphism, NormedGroupoid

logger = logging.getLogger('ngdef')


class ScalingGroup(ABC):
    """Commutative group ``Gamma`` with a morphism ``|.|`` onto a subgroup of ``(0, inf)``."""

    name: str = "scaling"

    @abstractmethod
    def product(self, a: Any, b: Any) -> Any:
        pass

    @abstractmethod
    def inverse(self, a: Any) -> Any:
        pass

    @property
    @abstractmethod
    def neutral(self) -> Any:
        pass

    @abstractmethod
    def modulus(self, a: Any) -> float:
        """The absolute value ``|a|``."""
        pass

    @abstractmethod
    def from_modulus(self, value: float) -> Any:
        """
        The element of absolute value ``value``.

        Raises:
            ValueError: If no element has that absolute value
        """
        pass

    def sample(self, rng: np.random.Generator, low: float = 0.25, high: float = 0.9) -> Any:
        """Random element with absolute value in ``[low, high]``."""
        return self.from_modulus(float(rng.uniform(low, high)))

    def power(self, a: Any, k: int) -> Any:
        """``a^k`` for any integer ``k``."""
        result = self.neutral
        base = a if k >= 0 else self.inverse(a)
        for _ in range(abs(k)):
            result = self.product(result, base)
        return result


class PositiveReals(ScalingGroup):
    """``(0, inf)`` under multiplication with ``|eps| = eps``."""

    name = "positive-reals"

    def product(self, a: float, b: float) -> float:
        return a * b

    def inverse(self, a: float) -> float:
        return 1.0 / a

    @property
    def neutral(self) -> float:
        return 1.0

    def modulus(self, a: float) -> float:
        if not a > 0:
            raise ValueError(f"scale must be positive, got {a}")
        return float(a)

    def from_modulus(self, value: float) -> float:
        return self.modulus(value)


class DyadicScaling(ScalingGroup):
    """
    Discrete group ``{base^k : k in Z}``.

    Elements are the integer exponents ``k``; ``|k| = base^k``.
    """

    def __init__(self, base: float = 0.5):
        if not 0.0 < base < 1.0:
            raise ValueError(f"base must lie in (0, 1), got {base}")
        self.base = base
        self.name = f"dyadic({base})"

    def product(self, a: int, b: int) -> int:
        return int(a) + int(b)

    def inverse(self, a: int) -> int:
        return -int(a)

    @property
    def neutral(self) -> int:
        return 0

    def modulus(self, a: int) -> float:
        return self.base ** int(a)

    def from_modulus(self, value: float) -> int:
        k = math.log(value) / math.log(self.base)
        if abs(k - round(k)) > 1e-9:
            raise ValueError(f"{value} is not a power of {self.base}")
        return int(round(k))

    def sample(self, rng: np.random.Generator, low: float = 0.25, high: float = 0.9) -> int:
        exponents = [k for k in range(64) if low <= self.base ** k <= high]
        if not exponents:
            raise ValueError(f"no power of {self.base} lies in [{low}, {high}]")
        return int(rng.choice(exponents))


@dataclass(frozen=True)
class DomainWitness:
    """
    Constants for the domain axioms on a bounded set of objects.

    ``1 < A < B`` bound the ball chain, ``R`` and ``eps0`` bound the pairs
    whose deformed difference must stay in ``dom(eps^{-1})``.
    """

    A: float = 2.0
    B: float = 4.0
    R: float = 1.0
    eps0: float = 0.5

    def __post_init__(self):
        if not 1.0 < self.A < self.B:
            raise InvalidModelSpec(f"domain witness needs 1 < A < B, got A={self.A}, B={self.B}")
        if not self.R > 0:
            raise InvalidModelSpec(f"domain witness needs R > 0, got {self.R}")
        if not 0.0 < self.eps0 <= 1.0:
            raise InvalidModelSpec(f"domain witness needs eps0 in (0, 1], got {self.eps0}")


class Deformation(ABC):
    """
    Abstract deformation of a normed groupoid.

    Subclasses implement :meth:`_apply`, which receives ``|eps|``. The domain
    of ``delta_eps`` is ``{g : |eps| d(g) <= domain_bound}``; a bound of
    ``None`` means every map is globally defined.
    """

    name: str = "deformation"

    def __init__(self, groupoid: NormedGroupoid, gamma: Optional[ScalingGroup] = None,
                 domain_bound: Optional[float] = None, witness: Optional[DomainWitness] = None):
        self.groupoid = groupoid
        self.gamma = gamma or PositiveReals()
        self.domain_bound = domain_bound
        self.witness = witness or DomainWitness()

    @abstractmethod
    def _apply(self, scale: float, g: Arrow) -> Arrow:
        """Apply ``delta`` at absolute scale ``scale`` to an in-domain arrow."""
        pass

    # -- domains -----------------------------------------------------------

    def domain_radius(self, eps: Any) -> float:
        """Norm radius of ``dom(eps)``."""
        if self.domain_bound is None:
            return float("inf")
        return self.domain_bound / self.gamma.modulus(eps)

    def domain_excess(self, eps: Any, g: Arrow) -> float:
        """How far ``g`` lies outside ``dom(eps)``; nonpositive inside."""
        if self.domain_bound is None:
            return -float("inf")
        return self.gamma.modulus(eps) * self.groupoid.norm(g) - self.domain_bound

    def in_domain(self, eps: Any, g: Arrow) -> bool:
        bound = self.domain_bound or 0.0
        return self.domain_excess(eps, g) <= ATOL * (1.0 + bound)

    def domain_witness(self, bounded_set: Any = None) -> DomainWitness:
        """Constants of the domain axioms, uniform over bounded sets for built-in models."""
        return self.witness

    # -- the maps ----------------------------------------------------------

    def deform(self, eps: Any, g: Arrow) -> Arrow:
        """
        ``delta_eps(g)``.

        Raises:
            NotInDomain: If ``g`` is outside ``dom(eps)``
        """
        if not self.in_domain(eps, g):
            raise NotInDomain(eps, g, self.domain_excess(eps, g))
        return self._apply(self.gamma.modulus(eps), g)

    def dilatation(self, eps: Any, h: Arrow, g: Arrow) -> Arrow:
        """
        Dilatation ``delta^h_eps g = delta_eps(g h^{-1}) h``.

        Args:
            eps: Scale
            h: Base arrow
            g: Arrow with the same source as ``h``

        Returns:
            Arrow with source ``alpha(h)``

        Raises:
            FiberMismatch: If ``alpha(g) != alpha(h)``
            NotInDomain: If ``g h^{-1}`` is outside ``dom(eps)``
        """
        G = self.groupoid
        return G.compose(self.deform(eps, G.dif(g, h)), h)

    def tilde_deform(self, eps: Any, g: Arrow, h: Arrow) -> Tuple[Arrow, Arrow]:
        """Deformation of the alpha-double groupoid: ``(delta_eps(g h^{-1}) h, h)``."""
        return self.dilatation(eps, h, g), h

    def double(self) -> "DoubleDeformation":
        """The induced deformation of the alpha-double groupoid."""
        return DoubleDeformation(self)

    def induce(self, mu: Any) -> "InducedDeformation":
        """Structures transported by ``delta_mu``."""
        if self.gamma.modulus(mu) > 1.0:
            logger.debug(f"inducing at |mu| = {self.gamma.modulus(mu)} > 1; domains may be small")
        return InducedDeformation(self, mu)

    # -- approximate operations ---------------------------------------------

    def approx_diff(self, eps: Any, g: Arrow, h: Arrow) -> Arrow:
        """``Delta_eps(g, h) = dif_eps(g, h) delta_eps(h)``."""
        G = self.groupoid
        return G.compose(self.induce(eps).dif(g, h), self.deform(eps, h))

    def approx_inv(self, eps: Any, g: Arrow) -> Arrow:
        """``inv_eps(g) = Delta_eps(e(alpha(g)), g)``."""
        G = self.groupoid
        return self.approx_diff(eps, G.identity(G.alpha(g)), g)

    def approx_sum(self, eps: Any, g: Arrow, h: Arrow) -> Arrow:
        """``Sigma_eps(g, h) = delta_{eps^{-1}}[delta_eps(g (delta_eps h)^{-1}) delta_eps h]``."""
        G = self.groupoid
        if not G.same_object(G.alpha(g), G.alpha(h)):
            raise FiberMismatch(g, h)
        dh = self.deform(eps, h)
        inner = self.deform(eps, G.compose(g, G.inverse(dh)))
        return self.deform(self.gamma.inverse(eps), G.compose(inner, dh))

    def based_diff(self, eps: Any, u: Arrow, g: Arrow, h: Arrow) -> Arrow:
        """``Delta^u_eps(g, h) = delta^{delta^u_eps g}_{eps^{-1}} delta^u_eps h``."""
        return self.dilatation(self.gamma.inverse(eps), self.dilatation(eps, u, g), self.dilatation(eps, u, h))

    def based_inv(self, eps: Any, u: Arrow, g: Arrow) -> Arrow:
        """``inv^u_eps(g) = Delta^u_eps(g, u)``."""
        return self.based_diff(eps, u, g, u)

    def based_sum(self, eps: Any, u: Arrow, g: Arrow, h: Arrow) -> Arrow:
        """``Sigma^u_eps(g, h) = delta^u_{eps^{-1}} delta^{delta^u_eps g}_eps h``."""
        return self.dilatation(self.gamma.inverse(eps), u, self.dilatation(eps, self.dilatation(eps, u, g), h))

    def limit_dilatation_net(self, eps: Any, mu: Any, x: Arrow, u: Arrow, v: Arrow) -> Arrow:
        """``delta^x_{eps^{-1}} delta^{delta^x_eps u}_mu delta^x_eps v``, whose limit is ``bar delta^{x,u}_mu v``."""
        return self.dilatation(self.gamma.inverse(eps), x,
                               self.dilatation(mu, self.dilatation(eps, x, u), self.dilatation(eps, x, v)))


class DoubleDeformation(Deformation):
    """Deformation ``(g, h) -> (delta^h_eps g, h)`` of the alpha-double groupoid."""

    def __init__(self, base: Deformation):
        super().__init__(AlphaDoubleGroupoid(base.groupoid), base.gamma, base.domain_bound, base.witness)
        self.base = base
        self.name = f"double({base.name})"

    def _apply(self, scale: float, p: Arrow) -> Arrow:
        G = self.base.groupoid
        g, h = p.target, p.source
        return Arrow(h, G.compose(self.base._apply(scale, G.dif(g, h)), h))


class InducedDeformation:
    """
    Structures transported by ``delta_mu``.

    ``G_mu`` equals ``G`` as a set with ``alpha_mu = alpha``,
    ``omega_mu = omega o delta_mu``, ``m_mu(g, h) = delta_mu^{-1}(delta_mu(g) delta_mu(h))``
    and norm ``d_mu(g) = d(delta_mu g) / |mu|``. Operations are only locally
    defined.
    """

    def __init__(self, deformation: Deformation, mu: Any):
        self.deformation = deformation
        self.mu = mu
        self.mu_inv = deformation.gamma.inverse(mu)
        self.scale = deformation.gamma.modulus(mu)

    @property
    def groupoid(self) -> NormedGroupoid:
        return self.deformation.groupoid

    def _up(self, g: Arrow) -> Arrow:
        return self.deformation.deform(self.mu, g)

    def _down(self, g: Arrow) -> Arrow:
        return self.deformation.deform(self.mu_inv, g)

    def alpha(self, g: Arrow) -> Any:
        return self.groupoid.alpha(g)

    def omega(self, g: Arrow) -> Any:
        return self.groupoid.omega(self._up(g))

    def composable(self, g: Arrow, h: Arrow) -> bool:
        return self.groupoid.composable(self._up(g), self._up(h))

    def compose(self, g: Arrow, h: Arrow) -> Arrow:
        """
        ``m_mu(g, h)``.

        Raises:
            NotComposableInduced: If ``omega(delta_mu h) != alpha(delta_mu g)``
            NotInDomain: If an intermediate arrow leaves its domain
        """
        G = self.groupoid
        up_g, up_h = self._up(g), self._up(h)
        if not G.composable(up_g, up_h):
            raise NotComposableInduced(g, h, self.mu)
        return self._down(G._multiply(up_g, up_h))

    def inverse(self, g: Arrow) -> Arrow:
        """``inv_mu(g) = delta_mu^{-1} inv delta_mu(g)``."""
        return self._down(self.groupoid.inverse(self._up(g)))

    def dif(self, g: Arrow, h: Arrow) -> Arrow:
        """``dif_mu(g, h) = delta_mu^{-1}(delta_mu(g) delta_mu(h)^{-1})``."""
        G = self.groupoid
        if not G.same_object(G.alpha(g), G.alpha(h)):
            raise FiberMismatch(g, h)
        return self._down(G.dif(self._up(g), self._up(h)))

    def norm(self, g: Arrow) -> float:
        """``d_mu(g) = d(delta_mu g) / |mu|``."""
        return self.groupoid.norm(self._up(g)) / self.scale

    def tilde_norm(self, g: Arrow, h: Arrow) -> float:
        """``d~_mu(g, h) = d~(delta_mu g, delta_mu h) / |mu|``."""
        return self.groupoid.fiber_distance(self._up(g), self._up(h)) / self.scale

    def deform(self, eps: Any, g: Arrow) -> Arrow:
        """The transported deformation, which is ``delta`` itself."""
        return self.deformation.deform(eps, g)

    def transported_deform(self, eps: Any, g: Arrow) -> Arrow:
        """``delta_mu^{-1} delta_eps delta_mu g`` computed literally."""
        return self._down(self.deformation.deform(eps, self._up(g)))

    def tilde_deform(self, eps: Any, g: Arrow, h: Arrow) -> Tuple[Arrow, Arrow]:
        """``(delta_{mu^{-1}}(delta_eps(delta_mu(g) delta_mu(h)^{-1}) delta_mu(h)), h)``."""
        G = self.groupoid
        up_h = self._up(h)
        moved = G.compose(self.deformation.deform(eps, G.dif(self._up(g), up_h)), up_h)
        return self._down(moved), h


def deformation_morphism_violation(morphism: GroupoidMorphism, source: Deformation, target: Deformation,
                                   arrows: Iterable[Arrow], scales: Iterable[Any],
                                   preserves_norm: bool = True) -> Tuple[float, Any]:
    """
    Largest violation of norm preservation and of ``F delta_eps = delta_eps F``.

    With ``preserves_norm=False`` only the commutation is checked, which is
    what projections onto quotient models satisfy. The groupoid-morphism laws
    are checked separately with :meth:`GroupoidMorphism.violation`.
    """
    worst, witness = 0.0, None
    scales = list(scales)
    for g in arrows:
        fg = morphism(g)
        d_src, d_dst = source.groupoid.norm(g), target.groupoid.norm(fg)
        value = abs(d_src - d_dst) / (1.0 + d_src) if preserves_norm else 0.0
        for eps in scales:
            value = max(value, target.groupoid.arrow_gap(morphism(source.deform(eps, g)), target.deform(eps, fg)))
        if value > worst:
            worst, witness = value, g
    return worst, witness
