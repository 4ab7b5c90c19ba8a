"""Finite normed groupoids and finite irqs loaded from JSON documents.

Groupoid documents::

    {"objects": [...],
     "arrows": [{"id": ..., "alpha": ..., "omega": ..., "norm": ...}, ...],
     "compose": [[g, h, gh], ...],
     "inverse": [[g, g_inv], ...],
     "identities": {"x": id, ...}}          # optional

``compose`` lists every composable pair ``(g, h)`` with ``omega(h) = alpha(g)``.
Identities are inferred as idempotent loops when not listed. Irq documents
have the keys ``carrier``, ``circ`` and ``bullet``.
"""

import json
import logging
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import InvalidModelSpec, NotComposable, Unsupported
from ..groupoid import ATOL, Arrow, NormedGroupoid
from ..irq import FiniteIrq
from .base import Model, ModelBundle

logger = logging.getLogger('ngdef')


class FiniteGroupoid(NormedGroupoid):
    """A normed groupoid given by tables; arrows carry their id as payload."""

    def __init__(self, objects: List[Any], arrows: Dict[str, Tuple[Any, Any, float]],
                 compose: Dict[Tuple[str, str], str], inverse: Dict[str, str],
                 identities: Optional[Dict[Any, str]] = None, name: str = "finite"):
        self.name = name
        self._objects = list(objects)
        self._arrows = dict(arrows)
        self._compose = dict(compose)
        self._inverse = dict(inverse)
        self._identities = dict(identities) if identities else self._infer_identities()
        self._check_identities()
        self.validate()

    def _check_identities(self) -> None:
        missing = [x for x in self._objects if x not in self._identities]
        if missing:
            raise InvalidModelSpec(f"{self.name}: identities table misses objects {missing}")
        extra = [x for x in self._identities if x not in self._objects]
        if extra:
            raise InvalidModelSpec(f"{self.name}: identities table names unknown objects {extra}")
        for x, i in self._identities.items():
            if i not in self._arrows:
                raise InvalidModelSpec(f"{self.name}: identity of {x!r} is unknown arrow {i!r}")
            alpha, omega, _ = self._arrows[i]
            if alpha != x or omega != x:
                raise InvalidModelSpec(f"{self.name}: identity {i!r} of {x!r} is not a loop at {x!r}")

    def _infer_identities(self) -> Dict[Any, str]:
        identities = {}
        for x in self._objects:
            loops = [i for i, (a, o, _) in self._arrows.items()
                     if a == x and o == x and self._compose.get((i, i)) == i]
            if len(loops) != 1:
                raise InvalidModelSpec(f"{self.name}: object {x!r} needs exactly one identity arrow, found {loops}")
            identities[x] = loops[0]
        return identities

    # -- structure ---------------------------------------------------------

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            alpha, omega, _ = self._arrows[arrow_id]
        except KeyError:
            raise ValueError(f"{self.name} has no arrow {arrow_id!r}")
        return Arrow(alpha, omega, arrow_id)

    def identity(self, x: Any) -> Arrow:
        try:
            return self.arrow(self._identities[x])
        except KeyError:
            raise ValueError(f"{x!r} is not an object of {self.name}")

    def _multiply(self, g: Arrow, h: Arrow) -> Arrow:
        try:
            return self.arrow(self._compose[(g.payload, h.payload)])
        except KeyError:
            raise NotComposable(g, h)

    def inverse(self, g: Arrow) -> Arrow:
        return self.arrow(self._inverse[g.payload])

    def norm(self, g: Arrow) -> float:
        return float(self._arrows[g.payload][2])

    def arrow_between(self, target: Any, source: Any) -> Arrow:
        candidates = [g for g in self.arrows() if g.source == source and g.target == target]
        if len(candidates) != 1:
            raise Unsupported(f"{self.name} has {len(candidates)} arrows from {source!r} to {target!r}")
        return candidates[0]

    # -- enumeration and sampling -------------------------------------------

    @property
    def is_finite(self) -> bool:
        return True

    def objects(self) -> List[Any]:
        return list(self._objects)

    def arrows(self) -> List[Arrow]:
        return [self.arrow(i) for i in self._arrows]

    def sample_object(self, rng: np.random.Generator, center: Any = None, radius: float = 1.0) -> Any:
        return self._objects[int(rng.integers(len(self._objects)))]

    def sample_fiber(self, rng: np.random.Generator, x: Any, radius: float = 1.0) -> Arrow:
        fiber = [g for g in self.arrows() if g.source == x]
        if not fiber:
            raise ValueError(f"{x!r} is not an object of {self.name}")
        near = [g for g in fiber if self.norm(g) <= radius] or fiber
        return near[int(rng.integers(len(near)))]

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        """
        Check the groupoid and norm axioms on every arrow, pair and triple.

        Raises:
            InvalidModelSpec: With the first violated law
        """
        def fail(message: str) -> None:
            raise InvalidModelSpec(f"{self.name}: {message}")

        for i, (alpha, omega, norm) in self._arrows.items():
            if alpha not in self._objects or omega not in self._objects:
                fail(f"arrow {i!r} has endpoints outside the object list")
            if not norm >= 0:
                fail(f"arrow {i!r} has negative norm {norm}")
            if i not in self._inverse or self._inverse[i] not in self._arrows:
                fail(f"arrow {i!r} has no inverse")
        arrows = self.arrows()
        for g, h in product(arrows, repeat=2):
            key = (g.payload, h.payload)
            composable = h.target == g.source
            if composable != (key in self._compose):
                fail(f"compose table {'misses' if composable else 'has extra'} pair {key}")
            if not composable:
                continue
            if self._compose[key] not in self._arrows:
                fail(f"compose table names unknown arrow {self._compose[key]!r}")
            gh = self._multiply(g, h)
            if gh.source != h.source or gh.target != g.target:
                fail(f"product of {key} has wrong endpoints")
            if self.norm(gh) > self.norm(g) + self.norm(h) + ATOL:
                fail(f"norm is not subadditive on {key}")
        for g in arrows:
            inv = self.inverse(g)
            if self.compose(inv, g).payload != self._identities[g.source]:
                fail(f"inverse law fails for {g.payload!r}")
            if self.compose(g, inv).payload != self._identities[g.target]:
                fail(f"inverse law fails for {g.payload!r}")
            if self.compose(g, self.identity(g.source)).payload != g.payload:
                fail(f"right identity law fails for {g.payload!r}")
            if self.compose(self.identity(g.target), g).payload != g.payload:
                fail(f"left identity law fails for {g.payload!r}")
            if abs(self.norm(inv) - self.norm(g)) > ATOL:
                fail(f"norm is not inverse invariant on {g.payload!r}")
            is_identity = g.payload == self._identities[g.source]
            if is_identity and self.norm(g) > ATOL:
                fail(f"identity {g.payload!r} has nonzero norm")
            if not is_identity and self.norm(g) <= ATOL:
                fail(f"non-identity arrow {g.payload!r} has zero norm")
        for g, h, k in self.composable_triples():
            if self.compose(self.compose(g, h), k).payload != self.compose(g, self.compose(h, k)).payload:
                fail(f"composition is not associative on {(g.payload, h.payload, k.payload)}")

    @classmethod
    def from_document(cls, document: Dict[str, Any], name: str = "finite") -> "FiniteGroupoid":
        missing = {"objects", "arrows", "compose", "inverse"} - set(document)
        if missing:
            raise InvalidModelSpec(f"{name}: groupoid document is missing {sorted(missing)}")
        try:
            arrows = {}
            for entry in document["arrows"]:
                if entry["id"] in arrows:
                    raise InvalidModelSpec(f"{name}: arrow id {entry['id']!r} is repeated")
                arrows[entry["id"]] = (entry["alpha"], entry["omega"], float(entry["norm"]))
            compose = {(g, h): gh for g, h, gh in document["compose"]}
            inverse = {g: g_inv for g, g_inv in document["inverse"]}
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidModelSpec(f"{name}: malformed groupoid document ({e})")
        return cls(document["objects"], arrows, compose, inverse, document.get("identities"), name=name)


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture document."""
    return Path(str(resources.files("ngdef.fixtures").joinpath(f"{name}.json")))


def load_document(path: Union[str, Path]) -> Tuple[str, Dict[str, Any]]:
    """
    Read a model document; bare names resolve to bundled fixtures.

    Raises:
        InvalidModelSpec: If the document cannot be read
    """
    path = Path(path)
    if not path.exists() and not path.suffix:
        path = fixture_path(path.name)
    try:
        return path.stem, json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidModelSpec(f"cannot read model document {path}: {e}")


class FiniteModel(Model):
    """Finite groupoid or finite irq read from a JSON document."""

    parameter = "path"

    @property
    def name(self) -> str:
        return "finite"

    @property
    def description(self) -> str:
        return "finite groupoid or irq from a JSON document (parameter: path or fixture name)"

    def validate_params(self, params):
        super().validate_params(params)
        if not params.get("path"):
            raise InvalidModelSpec("finite model needs a document path")

    def build(self, **params: Any) -> ModelBundle:
        stem, document = load_document(params["path"])
        spec = f"finite({params['path']})"
        if "carrier" in document:
            irq = FiniteIrq.from_document(document, name=stem)
            logger.info(f"Loaded finite irq {stem} with {len(irq.carrier)} elements")
            return ModelBundle(name=spec, irq=irq, parse_object=_member(irq.carrier),
                               default_object=irq.carrier[0], params=dict(params))
        groupoid = FiniteGroupoid.from_document(document, name=stem)
        logger.info(f"Loaded finite groupoid {stem} with {len(groupoid.arrows())} arrows")
        objects = groupoid.objects()
        return ModelBundle(name=spec, groupoid=groupoid, parse_object=_member(objects),
                           default_object=objects[0], params=dict(params))


def _member(values: List[Any]):
    def parse(value: Any) -> Any:
        if value in values:
            return value
        raise ValueError(f"not one of {values}")
    return parse
