"""Check reports and their JSON/CSV serializations."""

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from ..groupoid import describe
from .estimate import EpsSchedule, LimitEstimate

logger = logging.getLogger('ngdef')

# Witnesses kept per report.
MAX_WITNESSES = 5


@dataclass
class CheckReport:
    """
    Result of one check on one model.

    ``passed`` is ``max_violation <= tol``; ``witnesses`` hold the worst
    offending samples, largest violation first.
    """

    check: str
    model: str
    samples: int
    seed: int
    max_violation: float
    tol: float
    witnesses: List[Any] = field(default_factory=list)
    sampler: Optional[Dict[str, Any]] = None
    schedule: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @property
    def passed(self) -> bool:
        return bool(self.max_violation <= self.tol)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready mapping; the timestamp is the only field that varies between identical runs."""
        violation = self.max_violation
        payload = {
            "check": self.check,
            "model": self.model,
            "samples": self.samples,
            "seed": self.seed,
            "max_violation": float(violation) if math.isfinite(violation) else "inf",
            "tol": self.tol,
            "pass": self.passed,
            "witnesses": describe(self.witnesses),
            "sampler": self.sampler,
            "schedule": self.schedule,
        }
        if self.details:
            payload["details"] = describe(self.details)
        payload["timestamp"] = self.timestamp
        return payload


class ViolationTracker:
    """Running maximum of violations with the worst witnesses."""

    def __init__(self, limit: int = MAX_WITNESSES):
        self.limit = limit
        self.worst = 0.0
        self.count = 0
        self._witnesses: List[Any] = []

    def add(self, value: float, witness: Any) -> None:
        self.count += 1
        if math.isnan(value):
            value = float("inf")
        if value > self.worst:
            self.worst = value
        if value > 0.0:
            self._witnesses.append((value, witness))
            self._witnesses.sort(key=lambda item: -item[0])
            del self._witnesses[self.limit:]

    def witnesses(self, tol: float) -> List[Any]:
        """Witnesses above ``tol``."""
        return [{"violation": v, "witness": w} for v, w in self._witnesses if v > tol]

    def report(self, check: str, model: str, seed: int, tol: float, **kwargs: Any) -> CheckReport:
        return CheckReport(check, model, self.count, seed, self.worst, tol, self.witnesses(tol), **kwargs)


def write_reports_json(reports: Sequence[CheckReport], path: Union[str, Path]) -> None:
    """Write reports as a JSON array."""
    path = Path(path)
    path.write_text(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")
    logger.info(f"Wrote {len(reports)} reports to {path}")


def _flatten(value: Any) -> List[Any]:
    if isinstance(value, np.ndarray) or isinstance(value, (list, tuple)):
        return [float(v) for v in np.ravel(np.asarray(value, dtype=float))]
    if isinstance(value, (int, float, np.integer, np.floating)):
        return [float(value)]
    return [json.dumps(describe(value))]


def limit_rows(row: int, estimate: LimitEstimate) -> List[List[Any]]:
    """CSV rows of one estimate: one per scale, then the extrapolated limit."""
    rows = []
    for k, (eps, value) in enumerate(zip(estimate.scales, estimate.values)):
        residual = estimate.residuals[k - 1] if k > 0 else ""
        rows.append([row, eps, *_flatten(value), residual])
    rows.append([row, "limit", *_flatten(estimate.value), estimate.final_residual])
    return rows


def write_limit_csv(estimates: Sequence[LimitEstimate], path: Union[str, Path]) -> None:
    """
    Write limit tables as CSV with columns ``row, eps, value_0.., residual``.

    The residual at a scale is the distance to the previous scale's value.
    """
    path = Path(path)
    width = max((len(_flatten(e.value)) for e in estimates), default=1)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["row", "eps", *(f"value_{i}" for i in range(width)), "residual"])
        for row, estimate in enumerate(estimates):
            for line in limit_rows(row, estimate):
                values = line[2:-1]
                writer.writerow(line[:2] + values + [""] * (width - len(values)) + line[-1:])
    logger.info(f"Wrote {len(estimates)} limit tables to {path}")


def schedule_dict(schedule: Optional[EpsSchedule]) -> Optional[Dict[str, Any]]:
    return schedule.to_dict() if schedule is not None else None
