"""Idempotent right quasigroups.

An irq is a set with two operations ``circ`` and ``bullet`` such that
``x circ (x bullet y) = x bullet (x circ y) = y`` and ``x circ x = x bullet x = x``.
A Gamma-irq is a family ``eps -> circ_eps`` of irqs with
``bullet_eps = circ_{eps^{-1}}`` and ``x circ_eps (x circ_mu y) = x circ_{eps mu} y``.

Derived operations, for a base point ``x``:

- difference ``v -^x u = (x circ u) bullet (x circ v)``
- sum ``u +^x v = x bullet ((x circ u) circ v)``
- inverse ``-^x u = (x circ u) bullet x``

Dilatations on a groupoid fiber give a Gamma-irq, see :func:`from_dilatation`.
"""

import json
import logging
from abc import ABC, abstractmethod
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .deformation import Deformation, PositiveReals, ScalingGroup
from .errors import InvalidModelSpec, Unsupported, ZeroIndex
from .groupoid import Arrow, relative_gap

logger = logging.getLogger('ngdef')

# Finite irqs up to this size are validated on every pair.
EXHAUSTIVE_LIMIT = 64


class Direction(str, Enum):
    """Which of the two irq operations to apply."""

    CIRC = "circ"
    BULLET = "bullet"

    def flipped(self) -> "Direction":
        return Direction.BULLET if self is Direction.CIRC else Direction.CIRC


class Irq(ABC):
    """
    Abstract idempotent right quasigroup.

    Subclasses implement :meth:`circ` and :meth:`bullet`; the derived
    operations and iterates are defined here.
    """

    name: str = "irq"

    @abstractmethod
    def circ(self, x: Any, y: Any) -> Any:
        pass

    @abstractmethod
    def bullet(self, x: Any, y: Any) -> Any:
        pass

    def gap(self, a: Any, b: Any) -> float:
        """Closeness of two carrier elements."""
        return relative_gap(a, b)

    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        raise Unsupported(f"{self.name} does not support sampling")

    @property
    def is_finite(self) -> bool:
        return False

    def elements(self) -> List[Any]:
        raise Unsupported(f"{self.name} cannot enumerate its carrier")

    def apply(self, direction: Union[Direction, str], x: Any, y: Any) -> Any:
        """Apply ``circ`` or ``bullet``."""
        if Direction(direction) is Direction.CIRC:
            return self.circ(x, y)
        return self.bullet(x, y)

    def diff(self, x: Any, u: Any, v: Any) -> Any:
        """``v -^x u = (x circ u) bullet (x circ v)``."""
        return self.bullet(self.circ(x, u), self.circ(x, v))

    def sum(self, x: Any, u: Any, v: Any) -> Any:
        """``u +^x v = x bullet ((x circ u) circ v)``."""
        return self.bullet(x, self.circ(self.circ(x, u), v))

    def inv(self, x: Any, u: Any) -> Any:
        """``-^x u = (x circ u) bullet x``."""
        return self.bullet(self.circ(x, u), x)

    def iterate(self, k: int, direction: Union[Direction, str], x: Any, y: Any) -> Any:
        """
        Iterated operation ``x circ_k y``, with ``x circ_{k+1} y = x circ (x circ_k y)``.

        Negative indices swap the operations: ``x circ_k y = x bullet_{-k} y``.

        Raises:
            ZeroIndex: If ``k == 0``
        """
        if k == 0:
            raise ZeroIndex("irq iterates are indexed by nonzero integers")
        direction = Direction(direction)
        if k < 0:
            direction, k = direction.flipped(), -k
        result = y
        for _ in range(k):
            result = self.apply(direction, x, result)
        return result

    def iterated(self, k: int) -> "IteratedIrq":
        """The irq ``(X, circ_k, bullet_k)``."""
        if k == 0:
            raise ZeroIndex("irq iterates are indexed by nonzero integers")
        return IteratedIrq(self, k)

    def axiom_gaps(self, x: Any, y: Any) -> Dict[str, float]:
        """Gaps of the two quasigroup axioms at one pair."""
        return {
            "cancel-circ": self.gap(self.circ(x, self.bullet(x, y)), y),
            "cancel-bullet": self.gap(self.bullet(x, self.circ(x, y)), y),
            "idempotent-circ": self.gap(self.circ(x, x), x),
            "idempotent-bullet": self.gap(self.bullet(x, x), x),
        }


class IteratedIrq(Irq):
    """View of an irq through its ``k``-th iterates."""

    def __init__(self, base: Irq, k: int):
        self.base = base
        self.k = k
        self.name = f"{base.name}^{k}"

    def circ(self, x: Any, y: Any) -> Any:
        return self.base.iterate(self.k, Direction.CIRC, x, y)

    def bullet(self, x: Any, y: Any) -> Any:
        return self.base.iterate(self.k, Direction.BULLET, x, y)

    def gap(self, a: Any, b: Any) -> float:
        return self.base.gap(a, b)

    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self.base.sample(rng, center, radius)

    @property
    def is_finite(self) -> bool:
        return self.base.is_finite

    def elements(self) -> List[Any]:
        return self.base.elements()


class FiniteIrq(Irq):
    """
    Irq given by operation tables over a finite carrier.

    Tables are row-major: ``circ[i][j]`` is ``carrier[i] circ carrier[j]``.
    Entries name carrier elements.
    """

    def __init__(self, carrier: Sequence[Any], circ: Sequence[Sequence[Any]], bullet: Sequence[Sequence[Any]],
                 name: str = "finite-irq"):
        self.name = name
        self.carrier = list(carrier)
        self._index = {self._key(c): i for i, c in enumerate(self.carrier)}
        if len(self._index) != len(self.carrier):
            raise InvalidModelSpec(f"{name}: carrier has repeated elements")
        self._circ = self._table(circ, "circ")
        self._bullet = self._table(bullet, "bullet")
        self.validate()

    @staticmethod
    def _key(value: Any) -> Any:
        return json.dumps(value, sort_keys=True)

    def _table(self, rows: Sequence[Sequence[Any]], label: str) -> List[List[int]]:
        n = len(self.carrier)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise InvalidModelSpec(f"{self.name}: {label} table must be {n}x{n}")
        table = []
        for row in rows:
            try:
                table.append([self._index[self._key(entry)] for entry in row])
            except KeyError as e:
                raise InvalidModelSpec(f"{self.name}: {label} table entry {e} is not in the carrier")
        return table

    def validate(self) -> None:
        """
        Check both axioms on every pair, or on a seeded sample of pairs for large carriers.

        Raises:
            InvalidModelSpec: With the first failing pair
        """
        n = len(self.carrier)
        if n <= EXHAUSTIVE_LIMIT:
            pairs = product(range(n), repeat=2)
        else:
            logger.info(f"{self.name}: carrier of size {n}, validating a sample of pairs")
            rng = np.random.default_rng(0)
            pairs = (tuple(int(v) for v in rng.integers(n, size=2)) for _ in range(4096))
        for i, j in pairs:
            if self._circ[i][self._bullet[i][j]] != j or self._bullet[i][self._circ[i][j]] != j:
                raise InvalidModelSpec(
                    f"{self.name}: cancellation fails at ({self.carrier[i]!r}, {self.carrier[j]!r})"
                )
            if i == j and (self._circ[i][i] != i or self._bullet[i][i] != i):
                raise InvalidModelSpec(f"{self.name}: idempotence fails at {self.carrier[i]!r}")

    @classmethod
    def from_document(cls, document: Dict[str, Any], name: str = "finite-irq") -> "FiniteIrq":
        missing = {"carrier", "circ", "bullet"} - set(document)
        if missing:
            raise InvalidModelSpec(f"{name}: irq document is missing {sorted(missing)}")
        return cls(document["carrier"], document["circ"], document["bullet"], name=name)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FiniteIrq":
        """
        Load a finite irq from a JSON document.

        Raises:
            InvalidModelSpec: If the document is unreadable or violates the axioms
        """
        path = Path(path)
        try:
            document = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidModelSpec(f"cannot read irq document {path}: {e}")
        irq = cls.from_document(document, name=path.stem)
        logger.info(f"Loaded finite irq {path.stem} with {len(irq.carrier)} elements")
        return irq

    def _at(self, value: Any) -> int:
        try:
            return self._index[self._key(value)]
        except KeyError:
            raise ValueError(f"{value!r} is not in the carrier of {self.name}")

    def circ(self, x: Any, y: Any) -> Any:
        return self.carrier[self._circ[self._at(x)][self._at(y)]]

    def bullet(self, x: Any, y: Any) -> Any:
        return self.carrier[self._bullet[self._at(x)][self._at(y)]]

    def gap(self, a: Any, b: Any) -> float:
        return 0.0 if self._key(a) == self._key(b) else 1.0

    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self.carrier[int(rng.integers(len(self.carrier)))]

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> List[Any]:
        return list(self.carrier)


class GammaIrq(ABC):
    """
    A Gamma-irq: a family of irqs indexed by a scaling group.

    Subclasses implement :meth:`circ_at`; ``bullet_eps`` is ``circ_{eps^{-1}}``.
    """

    name: str = "gamma-irq"

    def __init__(self, gamma: Optional[ScalingGroup] = None):
        self.gamma = gamma or PositiveReals()

    @abstractmethod
    def circ_at(self, eps: Any, x: Any, y: Any) -> Any:
        pass

    def bullet_at(self, eps: Any, x: Any, y: Any) -> Any:
        return self.circ_at(self.gamma.inverse(eps), x, y)

    def gap(self, a: Any, b: Any) -> float:
        return relative_gap(a, b)

    @abstractmethod
    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        pass

    def at(self, eps: Any) -> "FixedScaleIrq":
        """The irq ``(X, circ_eps, bullet_eps)``."""
        return FixedScaleIrq(self, eps)

    def gamma_law_gap(self, eps: Any, mu: Any, x: Any, y: Any) -> float:
        """Gap of ``x circ_eps (x circ_mu y) = x circ_{eps mu} y``."""
        lhs = self.circ_at(eps, x, self.circ_at(mu, x, y))
        return self.gap(lhs, self.circ_at(self.gamma.product(eps, mu), x, y))

    def distributivity_gap(self, eps: Any, mu: Any, x: Any, u: Any, v: Any) -> float:
        """
        Gap of ``(x circ_mu v) -^x_eps (x circ_mu u) = (x circ_{eps mu} u) circ_mu (v -^x_{eps mu} u)``.
        """
        fixed = self.at(eps)
        lhs = fixed.diff(x, self.circ_at(mu, x, u), self.circ_at(mu, x, v))
        eps_mu = self.gamma.product(eps, mu)
        rhs = self.circ_at(mu, self.circ_at(eps_mu, x, u), self.at(eps_mu).diff(x, u, v))
        return self.gap(lhs, rhs)


class FixedScaleIrq(Irq):
    """A Gamma-irq frozen at one scale."""

    def __init__(self, family: GammaIrq, eps: Any):
        self.family = family
        self.eps = eps
        self.name = f"{family.name}@{eps}"

    def circ(self, x: Any, y: Any) -> Any:
        return self.family.circ_at(self.eps, x, y)

    def bullet(self, x: Any, y: Any) -> Any:
        return self.family.bullet_at(self.eps, x, y)

    def gap(self, a: Any, b: Any) -> float:
        return self.family.gap(a, b)

    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self.family.sample(rng, center, radius)


class DilatationIrq(GammaIrq):
    """
    Gamma-irq of dilatations on the fiber over an object.

    The carrier is ``alpha^{-1}(x)`` and ``g circ_eps h = delta^g_eps h``.
    """

    def __init__(self, deformation: Deformation, x: Any):
        super().__init__(deformation.gamma)
        self.deformation = deformation
        self.groupoid = deformation.groupoid
        self.x = x
        self.name = f"dilatations({deformation.name}, {x!r})"

    def circ_at(self, eps: Any, g: Arrow, h: Arrow) -> Arrow:
        return self.deformation.dilatation(eps, g, h)

    def gap(self, a: Arrow, b: Arrow) -> float:
        return self.groupoid.arrow_gap(a, b)

    def sample(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Arrow:
        """Fiber arrow over ``x`` of norm at most ``radius``; ``center`` is ignored."""
        return self.groupoid.sample_fiber(rng, self.x, radius)

    def base(self) -> Arrow:
        """The identity arrow ``e(x)``."""
        return self.groupoid.identity(self.x)


def from_dilatation(deformation: Deformation, x: Any) -> DilatationIrq:
    """
    Gamma-irq of the dilatations of a deformation on the fiber over ``x``.

    Raises:
        InvalidModelSpec: If the fiber over ``x`` cannot be sampled
    """
    try:
        deformation.groupoid.sample_fiber(np.random.default_rng(0), x, 1.0)
    except (ValueError, Unsupported) as e:
        raise InvalidModelSpec(f"fiber over {x!r} is not available: {e}")
    return DilatationIrq(deformation, x)


def identity_gaps(irq: Irq, x: Any, u: Any, v: Any, w: Any) -> Dict[str, float]:
    """
    Gaps of the identities satisfied by the derived operations of any irq.

    Returns:
        Mapping from identity name to gap at ``(x, u, v, w)``
    """
    s, d, m = irq.sum, irq.diff, irq.inv
    xu = irq.circ(x, u)
    return {
        "diff-cancels-sum": irq.gap(d(x, u, s(x, u, v)), v),
        "sum-cancels-diff": irq.gap(s(x, u, d(x, u, v)), v),
        "diff-as-shifted-sum": irq.gap(d(x, u, v), s(xu, m(x, u), v)),
        "inverse-involution": irq.gap(m(xu, m(x, u)), u),
        "shifted-associativity": irq.gap(s(x, u, s(xu, v, w)), s(x, s(x, u, v), w)),
        "inverse-as-diff": irq.gap(m(x, u), d(x, u, x)),
        "base-is-neutral": irq.gap(s(x, x, u), u),
    }


def worst_gap(gaps: Dict[str, float]) -> Tuple[str, float]:
    """Name and value of the largest gap."""
    name = max(gaps, key=gaps.get)
    return name, gaps[name]
