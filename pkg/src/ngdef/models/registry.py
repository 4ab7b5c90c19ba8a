"""Model registry and model-spec parsing."""

import logging
import re
from typing import Any, Optional, Tuple

import numpy as np

from ..errors import InvalidModelSpec, NotComposable
from ..registry import Registry
from .base import Model, ModelBundle

logger = logging.getLogger('ngdef')

_SPEC = re.compile(r"^\s*([A-Za-z][\w-]*)\s*(?:\((.*)\))?\s*$")

# Relative gap tolerated by the smoke check of a freshly built model.
SMOKE_TOL = 1e-6


class ModelRegistry(Registry[Model]):
    """Registry for managing available models."""

    kind = "model"
    missing_error = InvalidModelSpec


def parse_model_spec(spec: str) -> Tuple[str, Optional[str]]:
    """
    Split ``"name(param)"`` into its name and parameter.

    Raises:
        InvalidModelSpec: If the spec is malformed
    """
    match = _SPEC.match(spec or "")
    if not match:
        raise InvalidModelSpec(f"malformed model spec {spec!r}; expected name or name(param)")
    name, arg = match.group(1), match.group(2)
    if arg is not None:
        arg = arg.strip() or None
    return name, arg


def smoke_check(bundle: ModelBundle, samples: int = 16, seed: int = 0) -> None:
    """
    Check associativity and cancellation on a few sampled triples.

    Raises:
        InvalidModelSpec: If the groupoid laws fail
    """
    groupoid = bundle.groupoid
    if groupoid is None or groupoid.is_finite:
        return
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        g, h, k = groupoid.sample_triple(rng)
        try:
            gaps = (
                groupoid.arrow_gap(groupoid.compose(groupoid.compose(g, h), k),
                                   groupoid.compose(g, groupoid.compose(h, k))),
                groupoid.arrow_gap(groupoid.compose(groupoid.inverse(g), groupoid.compose(g, h)), h),
            )
        except NotComposable as e:
            raise InvalidModelSpec(f"model {bundle.name} fails its smoke check: {e}")
        if max(gaps) > SMOKE_TOL:
            raise InvalidModelSpec(f"model {bundle.name} fails its smoke check at {(g, h, k)!r}")


def build_model(spec: str, registry: ModelRegistry, **overrides: Any) -> ModelBundle:
    """
    Build a model from a spec such as ``euclidean(2)`` or ``finite(triangle)``.

    Args:
        spec: Model spec
        registry: Registry to look the model up in
        **overrides: Parameters that take precedence over the spec's; ``None`` values are ignored

    Returns:
        The built model

    Raises:
        InvalidModelSpec: For unknown models or invalid parameters
    """
    name, arg = parse_model_spec(spec)
    model = registry.get(name)
    params = {}
    if arg is not None:
        if model.parameter is None:
            raise InvalidModelSpec(f"model {name} takes no parameter, got {arg!r}")
        params[model.parameter] = arg
    params.update({k: v for k, v in overrides.items() if v is not None})
    model.validate_params(params)
    bundle = model.build(**params)
    smoke_check(bundle)
    logger.info(f"Built model {bundle.name}")
    return bundle
