"""Named pass/fail records for bound checks, shared across modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    status: str
    lhs: str
    rhs: str

    @classmethod
    def make(cls, name: str, ok: bool, lhs, rhs) -> "BoundCheck":
        return cls(name, PASS if ok else FAIL, fmt_value(lhs), fmt_value(rhs))

    @classmethod
    def inconclusive(cls, name: str, lhs, rhs) -> "BoundCheck":
        return cls(name, INCONCLUSIVE, fmt_value(lhs), fmt_value(rhs))

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def line(self) -> str:
        return f"check {self.name} {self.status} {self.lhs} {self.rhs}"
