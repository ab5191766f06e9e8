"""Structured outcomes of verification runs."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

INEQUALITY_TOL = 1e-9


def jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays, fractions and tuples into JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    if value is None or isinstance(value, str):
        return value
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return str(value)
    return repr(value)


@dataclass
class VerificationRecord:
    """One checked statement.

    For inequality records ``passed`` means ``ratio <= 1 + tolerance``.  A record
    with ``expected_failure`` is a negative control: ``passed`` then means the
    violation it is built to exhibit was actually observed.
    """

    name: str
    suite: str = ""
    inputs: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)
    passed: bool = False
    expected_failure: bool = False
    report_only: bool = False
    witness: Any = None
    runtime_ms: float = 0.0

    @property
    def ratio(self) -> float | None:
        return self.quantities.get("ratio")

    def to_dict(self) -> dict:
        return jsonable(asdict(self))


def inequality_record(name: str, lhs: float, rhs: float, tol: float = INEQUALITY_TOL, **extra) -> VerificationRecord:
    """Record for ``lhs <= rhs``; ``ratio`` is 0 when both sides vanish."""
    if rhs > 0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs <= 0 else math.inf
    quantities = {"lhs": float(lhs), "rhs": float(rhs), "ratio": float(ratio), "tolerance": tol}
    quantities.update(extra.pop("quantities", {}))
    return VerificationRecord(
        name=name, quantities=quantities, passed=bool(ratio <= 1 + tol), **extra
    )
