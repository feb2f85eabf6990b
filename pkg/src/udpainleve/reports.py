"""Per-m check records shared by the exact and numeric verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class CheckRecord:
    m: int
    passed: bool
    lhs: Any = None
    rhs: Any = None
    residual: Optional[float] = None
    cancel_flags: int = 0
    note: str = ""


@dataclass
class ResidualReport:
    """Outcome of checking one equation over a set of points.

    ``pass`` means exact equality for max-plus checks and
    ``residual <= threshold`` for numeric ones.
    """

    equation: str
    records: list = field(default_factory=list)
    threshold: Optional[float] = None

    @property
    def fail_count(self) -> int:
        return sum(not r.passed for r in self.records)

    @property
    def passed(self) -> bool:
        return self.fail_count == 0

    @property
    def max_residual(self) -> Optional[float]:
        vals = [r.residual for r in self.records if r.residual is not None]
        return max(vals) if vals else None

    def failures(self):
        return [r for r in self.records if not r.passed]

    def extend(self, other: "ResidualReport") -> None:
        self.records.extend(other.records)

    def summary(self) -> str:
        parts = [f"{self.equation}: {len(self.records)} checks, {self.fail_count} failures"]
        if self.max_residual is not None:
            parts.append(f"max residual {self.max_residual:.3e}")
        return ", ".join(parts)
