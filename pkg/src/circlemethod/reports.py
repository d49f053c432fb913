"""Result records shared by the checking modules."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum


class Regime(str, Enum):
    SAX = "Sax"
    SAX2 = "Sax2"
    SAX3 = "Sax3"
    LAB = "Lab"
    STRONG_MINOR = "StrongMinor"
    CHEN_WANG = "ChenWang"


def _plain(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, dict):
        return {k: _plain(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(u) for u in v]
    if hasattr(v, "item"):
        return v.item()
    if not isinstance(v, (int, float, str, bool, type(None))):
        f = float(v)
        # arbitrary-precision values beyond double range keep their digits
        return str(v) if math.isinf(f) and v == v and abs(v) != f else f
    return v


@dataclass
class InequalityCheck:
    """A numerically evaluated inequality ``lhs <= rhs``.

    ``passed`` is None when a hypothesis of the inequality fails, because the
    comparison then says nothing about the claim.
    """

    lhs: float
    rhs: float
    anchor: str = ""
    hypotheses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def hypotheses_ok(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def passed(self):
        if not self.hypotheses_ok:
            return None
        return bool(self.margin >= 0)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(margin=self.margin, hypotheses_ok=self.hypotheses_ok, passed=self.passed)
        return _plain(d)


@dataclass
class BoundReport:
    """An upper bound compared with the quantity it bounds (``actual`` may be NaN)."""

    bound: float
    actual: float = math.nan
    regime: Regime | None = None
    hypotheses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.bound - self.actual

    @property
    def hypotheses_ok(self) -> bool:
        return all(ok for _, ok in self.hypotheses)

    @property
    def passed(self):
        if not self.hypotheses_ok or math.isnan(float(self.actual)):
            return None
        return bool(self.margin >= 0)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(margin=self.margin, hypotheses_ok=self.hypotheses_ok, passed=self.passed)
        return _plain(d)
