"""Three-valued decision record shared by the deciders and trend checkers."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

__all__ = ["Verdict", "HOLDS", "FAILS", "TREND", "jsonable"]

HOLDS = "Holds"
FAILS = "Fails"
TREND = "NumericTrend"


def jsonable(x: Any) -> Any:
    """Convert numbers, fractions and containers into JSON-friendly values."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return jsonable(x.item())
    return x


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``outcome`` is ``Holds``, ``Fails`` or ``NumericTrend``.  Trend
    verdicts carry ``trend`` (``converges``, ``diverges`` or
    ``undecided``), the window sequence in ``grid`` and a fitted ``slope``.
    """

    outcome: str
    path: str
    witness: Any = None
    grid: tuple = ()
    trend: str | None = None
    slope: float | None = None
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.outcome not in (HOLDS, FAILS, TREND):
            raise ValueError(f"bad outcome {self.outcome!r}")
        if self.path not in ("closed-form", "numeric"):
            raise ValueError(f"bad path {self.path!r}")

    @property
    def holds(self) -> bool:
        return self.outcome == HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome == FAILS

    @property
    def positive(self) -> bool | None:
        """True for Holds / converging trend, False for Fails / diverging."""
        if self.outcome == HOLDS or self.trend == "converges":
            return True
        if self.outcome == FAILS or self.trend == "diverges":
            return False
        return None

    def to_dict(self) -> dict:
        d = {
            "outcome": self.outcome,
            "path": self.path,
            "witness": jsonable(self.witness),
            "grid": jsonable(list(self.grid)),
        }
        if self.trend is not None:
            d["trend"] = self.trend
        if self.slope is not None:
            d["slope"] = jsonable(self.slope)
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)
