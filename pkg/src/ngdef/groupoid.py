"""Core normed-groupoid interface.

A groupoid is a small category whose arrows are all invertible. Arrows carry a
source ``alpha`` and a target ``omega``; ``compose(g, h)`` is defined when
``omega(h) == alpha(g)`` and produces ``gh`` with ``alpha(gh) = alpha(h)`` and
``omega(gh) = omega(g)``.

Models implement :class:`Groupoid` (structure only) or :class:`NormedGroupoid`
(structure plus a norm). Everything here is a pure function of immutable
values; arrows are frozen dataclasses and models hold no mutable state.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import FiberMismatch, NotAMorphism, NotComposable, NotSeparating, Unsupported

logger = logging.getLogger('ngdef')

# Default absolute/relative closeness for floating-point objects and arrows.
ATOL = 1e-9


def is_numeric(value: Any) -> bool:
    """Return True for scalars and arrays that support vector arithmetic."""
    if isinstance(value, bool):
        return False
    return isinstance(value, (int, float, np.integer, np.floating, np.ndarray))


def relative_gap(a: Any, b: Any) -> float:
    """
    Measure how far apart two payloads are.

    Numeric payloads compare by maximum absolute difference, scaled by the
    larger magnitude when it exceeds one. Anything else compares by equality
    and yields 0.0 or 1.0.

    Args:
        a: First payload
        b: Second payload

    Returns:
        Nonnegative gap; ``inf`` for numeric payloads of different shapes
    """
    if is_numeric(a) and is_numeric(b):
        left = np.asarray(a, dtype=float)
        right = np.asarray(b, dtype=float)
        if left.shape != right.shape:
            return float("inf")
        if left.size == 0:
            return 0.0
        diff = float(np.max(np.abs(left - right)))
        scale = max(1.0, float(np.max(np.abs(left))), float(np.max(np.abs(right))))
        return diff / scale
    if is_numeric(a) or is_numeric(b):
        return 1.0
    return 0.0 if a == b else 1.0


def describe(value: Any) -> Any:
    """Convert arrows, arrays and tuples into JSON-friendly structures."""
    if isinstance(value, Arrow):
        return {
            "source": describe(value.source),
            "target": describe(value.target),
            "payload": describe(value.payload),
        }
    if isinstance(value, np.ndarray):
        return [describe(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (list, tuple)):
        return [describe(v) for v in value]
    if isinstance(value, dict):
        return {str(k): describe(v) for k, v in value.items()}
    return value


def _short(value: Any) -> str:
    if isinstance(value, np.ndarray):
        return np.array2string(value, precision=6, separator=",")
    return repr(value)


@dataclass(frozen=True, eq=False)
class Arrow:
    """
    An arrow of a groupoid.

    ``source`` and ``target`` are object identifiers (points, labels, arrows of
    another groupoid); ``payload`` is whatever the model needs to recover the
    arrow beyond its endpoints. Equality is model-supplied closeness, see
    :meth:`Groupoid.arrow_gap`.
    """

    source: Any
    target: Any
    payload: Any = None

    def __repr__(self) -> str:
        if self.payload is None:
            return f"Arrow({_short(self.source)} -> {_short(self.target)})"
        return f"Arrow({_short(self.source)} -> {_short(self.target)}; {_short(self.payload)})"


class ConvergenceMode(str, Enum):
    """Convergence of a sequence of arrows to a limit arrow."""

    SIMPLE = "simple"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ConvergenceTrace:
    """Outcome of :meth:`NormedGroupoid.converges_to`."""

    converged: bool
    residuals: List[float]
    mode: ConvergenceMode

    @property
    def final(self) -> float:
        return self.residuals[-1] if self.residuals else float("inf")

    def __bool__(self) -> bool:
        return self.converged


def accept_residuals(residuals: Sequence[float], tol: float) -> bool:
    """
    Finite-sequence proxy for convergence.

    Accepts when the final residual is at most ``tol`` and the residuals are
    non-increasing over the last quarter of the sequence.

    Args:
        residuals: Residual trace, oldest first
        tol: Tolerance on the final residual

    Returns:
        True if the trace is accepted
    """
    if not residuals:
        return False
    if not residuals[-1] <= tol:
        return False
    tail = max(1, len(residuals) // 4)
    window = list(residuals[-(tail + 1):])
    return all(later <= earlier + ATOL * (1.0 + earlier) for earlier, later in zip(window, window[1:]))


class Groupoid(ABC):
    """
    Abstract groupoid: objects, arrows, partial composition and inverse.

    Subclasses implement :meth:`identity`, :meth:`_multiply` and
    :meth:`inverse`; composability checking and the difference function are
    derived here.
    """

    name: str = "groupoid"

    # -- structure ---------------------------------------------------------

    @abstractmethod
    def identity(self, x: Any) -> Arrow:
        """
        Return the identity arrow ``e(x)``.

        Args:
            x: Object

        Returns:
            Arrow with source and target ``x``
        """
        pass

    @abstractmethod
    def _multiply(self, g: Arrow, h: Arrow) -> Arrow:
        """Compose two arrows already known to be composable."""
        pass

    @abstractmethod
    def inverse(self, g: Arrow) -> Arrow:
        """
        Return ``g^{-1}``.

        Args:
            g: Arrow

        Returns:
            Arrow with source ``omega(g)`` and target ``alpha(g)``
        """
        pass

    def alpha(self, g: Arrow) -> Any:
        """Source of an arrow."""
        return g.source

    def omega(self, g: Arrow) -> Any:
        """Target of an arrow."""
        return g.target

    # -- closeness ---------------------------------------------------------

    def object_gap(self, x: Any, y: Any) -> float:
        """Distance-like gap between two objects used for equality tests."""
        return relative_gap(x, y)

    def payload_gap(self, p: Any, q: Any) -> float:
        """Gap between two arrow payloads."""
        return relative_gap(p, q)

    def arrow_gap(self, g: Arrow, h: Arrow) -> float:
        """
        Gap between two arrows.

        Returns:
            Maximum of the source, target and payload gaps
        """
        return max(
            self.object_gap(g.source, h.source),
            self.object_gap(g.target, h.target),
            self.payload_gap(g.payload, h.payload),
        )

    def same_object(self, x: Any, y: Any, tol: float = ATOL) -> bool:
        return self.object_gap(x, y) <= tol

    def same_arrow(self, g: Arrow, h: Arrow, tol: float = ATOL) -> bool:
        return self.arrow_gap(g, h) <= tol

    def is_identity(self, g: Arrow, tol: float = ATOL) -> bool:
        """True when ``g`` is (within tolerance) the identity at its source."""
        if not self.same_object(g.source, g.target, tol):
            return False
        return self.arrow_gap(g, self.identity(g.source)) <= tol

    # -- derived operations ------------------------------------------------

    def composable(self, g: Arrow, h: Arrow) -> bool:
        """True when ``(g, h)`` is a composable pair, i.e. ``omega(h) == alpha(g)``."""
        return self.same_object(self.omega(h), self.alpha(g))

    def compose(self, g: Arrow, h: Arrow) -> Arrow:
        """
        Compose two arrows.

        Args:
            g: Left arrow
            h: Right arrow, with ``omega(h) == alpha(g)``

        Returns:
            The arrow ``gh``

        Raises:
            NotComposable: If the target of ``h`` differs from the source of ``g``
        """
        if not self.composable(g, h):
            raise NotComposable(g, h)
        return self._multiply(g, h)

    def dif(self, g: Arrow, h: Arrow) -> Arrow:
        """
        Difference function ``dif(g, h) = g h^{-1}``.

        Args:
            g: Arrow
            h: Arrow with the same source as ``g``

        Returns:
            Arrow from ``omega(h)`` to ``omega(g)``

        Raises:
            FiberMismatch: If ``alpha(g) != alpha(h)``
        """
        if not self.same_object(self.alpha(g), self.alpha(h)):
            raise FiberMismatch(g, h)
        return self._multiply(g, self.inverse(h))

    # -- enumeration and sampling -------------------------------------------

    @property
    def is_finite(self) -> bool:
        """True for models that can enumerate all their arrows."""
        return False

    def objects(self) -> List[Any]:
        raise Unsupported(f"{self.name} cannot enumerate its objects")

    def arrows(self) -> List[Arrow]:
        raise Unsupported(f"{self.name} cannot enumerate its arrows")

    def composable_pairs(self) -> Iterator[Tuple[Arrow, Arrow]]:
        """Enumerate all composable pairs of a finite groupoid."""
        arrows = self.arrows()
        for g, h in product(arrows, repeat=2):
            if self.composable(g, h):
                yield g, h

    def composable_triples(self) -> Iterator[Tuple[Arrow, Arrow, Arrow]]:
        """Enumerate all composable triples ``(g, h, k)`` of a finite groupoid."""
        arrows = self.arrows()
        for g, h in self.composable_pairs():
            for k in arrows:
                if self.composable(h, k):
                    yield g, h, k

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        """Draw an object from a bounded set around ``center``."""
        raise Unsupported(f"{self.name} does not support object sampling")

    def sample_fiber(self, rng: np.random.Generator, x: Any, radius: float = 1.0) -> Arrow:
        """Draw an arrow with source ``x`` and norm at most ``radius`` where meaningful."""
        raise Unsupported(f"{self.name} does not support fiber sampling")

    def sample_pair(self, rng: np.random.Generator, center: Any = None,
                    radius: float = 1.0) -> Tuple[Arrow, Arrow]:
        """Draw a composable pair ``(g, h)``."""
        h = self.sample_fiber(rng, self.sample_object(rng, center, radius), radius)
        g = self.sample_fiber(rng, self.omega(h), radius)
        return g, h

    def sample_triple(self, rng: np.random.Generator, center: Any = None,
                      radius: float = 1.0) -> Tuple[Arrow, Arrow, Arrow]:
        """Draw a composable triple ``(g, h, k)``."""
        k = self.sample_fiber(rng, self.sample_object(rng, center, radius), radius)
        h = self.sample_fiber(rng, self.omega(k), radius)
        g = self.sample_fiber(rng, self.omega(h), radius)
        return g, h, k


class NormedGroupoid(Groupoid):
    """
    Groupoid with a norm ``d``: ``d(e(x)) = 0``, ``d(gh) <= d(g) + d(h)`` and
    ``d(g^{-1}) = d(g)``.

    ``separable`` is the model's assertion that nets with vanishing norm only
    connect an object to itself; it can be sanity-checked on samples only.
    """

    separable: bool = True

    @abstractmethod
    def norm(self, g: Arrow) -> float:
        """
        Norm of an arrow.

        Args:
            g: Arrow

        Returns:
            Nonnegative real
        """
        pass

    def fiber_distance(self, g: Arrow, h: Arrow) -> float:
        """
        Distance ``d_x(g, h) = d(g h^{-1})`` on the fiber over ``x = alpha(g)``.

        Raises:
            FiberMismatch: If ``g`` and ``h`` have different sources
        """
        return self.norm(self.dif(g, h))

    def object_distance(self, x: Any, y: Any) -> float:
        """
        Infimum of ``d(g)`` over arrows with ``alpha(g) = x`` and ``omega(g) = y``.

        Returns:
            Nonnegative real, or ``inf`` when no arrow connects the objects

        Raises:
            Unsupported: If the model has neither a closed form nor an enumeration
        """
        if self.is_finite:
            candidates = [self.norm(g) for g in self.arrows()
                          if self.same_object(g.source, x) and self.same_object(g.target, y)]
            return min(candidates) if candidates else float("inf")
        raise Unsupported(f"{self.name} has no closed form for the object distance")

    def coordinates(self, g: Arrow) -> np.ndarray:
        """
        Numeric coordinates of a fiber arrow, used by limit estimation.

        The default reads the target object, which identifies fiber arrows of
        trivial groupoids and free transitive action groupoids.

        Raises:
            Unsupported: If the target is not numeric
        """
        if not is_numeric(g.target):
            raise Unsupported(f"{self.name} arrows have no numeric coordinates")
        return np.asarray(g.target, dtype=float)

    def arrow_between(self, target: Any, source: Any) -> Arrow:
        """Return the arrow from ``source`` to ``target`` when it is unique."""
        raise Unsupported(f"{self.name} cannot build an arrow from its endpoints")

    def solve_simple(self, a_k: Arrow, a: Arrow) -> Tuple[Arrow, Arrow]:
        """
        Find ``(h, g)`` with ``h a_k g = a``.

        Raises:
            Unsupported: If the model cannot solve for the correcting arrows
        """
        raise Unsupported(f"{self.name} does not support simple convergence")

    def converges_to(self, seq: Sequence[Arrow], a: Arrow, mode: ConvergenceMode = ConvergenceMode.RIGHT,
                     tol: float = ATOL) -> ConvergenceTrace:
        """
        Decide whether a finite sequence of arrows approaches ``a``.

        Right mode uses ``d(a_k a^{-1})``, left mode ``d(a_k^{-1} a)`` and
        simple mode ``d(h_k) + d(g_k)`` where ``h_k a_k g_k = a``.

        Args:
            seq: Finite sequence, oldest first
            a: Candidate limit
            mode: Convergence mode
            tol: Tolerance on the final residual

        Returns:
            Trace with the acceptance flag and the residuals

        Raises:
            NotComposable: If a term violates the mode's composability condition
        """
        mode = ConvergenceMode(mode)
        residuals: List[float] = []
        a_inv = self.inverse(a)
        for a_k in seq:
            if mode is ConvergenceMode.RIGHT:
                residuals.append(self.norm(self.compose(a_k, a_inv)))
            elif mode is ConvergenceMode.LEFT:
                residuals.append(self.norm(self.compose(self.inverse(a_k), a)))
            else:
                h_k, g_k = self.solve_simple(a_k, a)
                residuals.append(self.norm(h_k) + self.norm(g_k))
        trace = ConvergenceTrace(accept_residuals(residuals, tol), residuals, mode)
        logger.debug(f"convergence ({mode.value}): final residual {trace.final:.3g}, accepted={trace.converged}")
        return trace


@dataclass(frozen=True)
class SeminormFamily:
    """Indexed family of seminorms on a groupoid."""

    members: Mapping[str, Callable[[Arrow], float]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(self.members)

    def __getitem__(self, name: str) -> Callable[[Arrow], float]:
        return self.members[name]

    def evaluate(self, g: Arrow) -> Dict[str, float]:
        """Value of every member on ``g``."""
        return {name: float(rho(g)) for name, rho in self.members.items()}

    def violation(self, groupoid: Groupoid, pairs: Iterable[Tuple[Arrow, Arrow]]) -> Tuple[float, Any]:
        """
        Largest violation of the seminorm axioms over composable pairs.

        Checks ``rho(e(x)) = 0``, ``rho(gh) <= rho(g) + rho(h)``,
        ``rho(g^{-1}) = rho(g)`` for every member, and that some member is
        nonzero on each non-identity arrow.

        Returns:
            Tuple of (violation, witness)
        """
        worst, witness = 0.0, None
        for g, h in pairs:
            gh = groupoid.compose(g, h)
            for arrow in (g, h):
                values = self.evaluate(arrow)
                if values and max(values.values()) == 0.0 and not groupoid.is_identity(arrow):
                    return float("inf"), {"axiom": "vanishing", "arrow": arrow}
            for name, rho in self.members.items():
                e = groupoid.identity(groupoid.alpha(g))
                rg, rh, rgh = rho(g), rho(h), rho(gh)
                candidates = {
                    "identity": abs(rho(e)),
                    "subadditive": max(0.0, rgh - rg - rh) / (1.0 + rg + rh),
                    "inverse": abs(rho(groupoid.inverse(g)) - rg) / (1.0 + rg),
                }
                for axiom, value in candidates.items():
                    if value > worst:
                        worst, witness = value, {"member": name, "axiom": axiom, "pair": (g, h)}
        return worst, witness


@dataclass(frozen=True)
class GroupoidMorphism:
    """A map of groupoids given by its object and arrow components."""

    name: str
    domain: Groupoid
    codomain: NormedGroupoid
    on_objects: Callable[[Any], Any]
    on_arrows: Callable[[Arrow], Arrow]
    isometry: bool = False

    def __call__(self, g: Arrow) -> Arrow:
        return self.on_arrows(g)

    def violation(self, pairs: Iterable[Tuple[Arrow, Arrow]]) -> Tuple[float, Any]:
        """
        Largest violation of the morphism laws over composable pairs.

        Returns:
            Tuple of (violation, witness pair)
        """
        worst, witness = 0.0, None
        src, dst = self.domain, self.codomain
        for g, h in pairs:
            fg, fh = self(g), self(h)
            gaps = [
                dst.object_gap(dst.alpha(fg), self.on_objects(src.alpha(g))),
                dst.object_gap(dst.omega(fg), self.on_objects(src.omega(g))),
                dst.arrow_gap(self(src.inverse(g)), dst.inverse(fg)),
                dst.arrow_gap(self(src.identity(src.alpha(g))), dst.identity(self.on_objects(src.alpha(g)))),
            ]
            if dst.composable(fg, fh):
                gaps.append(dst.arrow_gap(self(src.compose(g, h)), dst.compose(fg, fh)))
            else:
                gaps.append(max(1.0, dst.object_gap(dst.omega(fh), dst.alpha(fg))))
            value = max(gaps)
            if value > worst:
                worst, witness = value, (g, h)
        return worst, witness


def identity_morphism(groupoid: NormedGroupoid) -> GroupoidMorphism:
    """The identity morphism of a normed groupoid."""
    return GroupoidMorphism("identity", groupoid, groupoid, lambda x: x, lambda g: g, isometry=True)


def seminorms_from_morphisms(morphisms: Sequence[GroupoidMorphism],
                             pairs: Sequence[Tuple[Arrow, Arrow]],
                             tol: float = ATOL) -> SeminormFamily:
    """
    Build the seminorm family ``{d o A : A in L}`` from morphisms into normed groupoids.

    Args:
        morphisms: Family ``L``; every member must share its domain
        pairs: Composable pairs of the domain used to check the morphism laws
        tol: Tolerance on morphism-law violations

    Returns:
        Seminorm family keyed by morphism name

    Raises:
        NotAMorphism: If a member violates the morphism laws on a sample
        NotSeparating: If a sampled non-identity arrow is sent to identities by every member
    """
    pairs = list(pairs)
    for morphism in morphisms:
        violation, witness = morphism.violation(pairs)
        if violation > tol:
            raise NotAMorphism(morphism.name, witness, violation)
    for g, h in pairs:
        for arrow in (g, h):
            domain = morphisms[0].domain if morphisms else None
            if domain is None or domain.is_identity(arrow):
                continue
            if all(m.codomain.is_identity(m(arrow)) for m in morphisms):
                raise NotSeparating(arrow)
    members = {m.name: (lambda g, m=m: m.codomain.norm(m(g))) for m in morphisms}
    logger.debug(f"seminorm family built from {len(members)} morphisms")
    return SeminormFamily(members)
