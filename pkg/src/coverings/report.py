"""Structured verdicts returned by the theorem checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def render_number(value: Any) -> Any:
    """Exact rendering for report fields: ints stay ints, rationals become "p/q"."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.3e}"
    if isinstance(value, (list, tuple)):
        return [render_number(v) for v in value]
    if isinstance(value, dict):
        return {str(k): render_number(v) for k, v in value.items()}
    return value


@dataclass
class Witness:
    """One checked inequality ``lhs >= rhs`` (or ``<=``, per ``relation``)."""

    subject: Any
    inequality: str
    lhs: Any
    rhs: Any
    relation: str = ">="
    holds: bool | None = None

    def __post_init__(self) -> None:
        if self.holds is None and self.relation in (">=", "<=", "==", "<"):
            self.holds = _compare(self.lhs, self.rhs, self.relation)

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": render_number(self.subject),
            "inequality": self.inequality,
            "lhs": render_number(self.lhs),
            "relation": self.relation,
            "rhs": render_number(self.rhs),
            "holds": self.holds,
        }

    def __str__(self) -> str:
        mark = "ok" if self.holds else ("n/a" if self.holds is None else "FAIL")
        lhs, rhs = render_number(self.lhs), render_number(self.rhs)
        return f"[{mark}] {self.inequality} @ {render_number(self.subject)}: {lhs} {self.relation} {rhs}"


def _compare(lhs: Any, rhs: Any, relation: str) -> bool:
    if relation == ">=":
        return lhs >= rhs
    if relation == "<=":
        return lhs <= rhs
    if relation == "<":
        return lhs < rhs
    return lhs == rhs


@dataclass
class BoundReport:
    name: str
    witnesses: list[Witness] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        # n/a witnesses (holds is None) do not count against the verdict
        return all(w.holds is not False for w in self.witnesses)

    @property
    def failures(self) -> list[Witness]:
        return [w for w in self.witnesses if w.holds is False]

    def add(self, *args: Any, **kwargs: Any) -> Witness:
        w = Witness(*args, **kwargs)
        self.witnesses.append(w)
        return w

    def extend(self, other: "BoundReport") -> None:
        self.witnesses.extend(other.witnesses)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "verdict": "pass" if self.verdict else "fail",
            "details": render_number(self.details),
            "witnesses": [w.to_dict() for w in self.witnesses],
        }

    def to_text(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.verdict else 'FAIL'}"]
        for key, value in self.details.items():
            lines.append(f"  {key} = {render_number(value)}")
        lines.extend(f"  {w}" for w in self.witnesses)
        return "\n".join(lines)
