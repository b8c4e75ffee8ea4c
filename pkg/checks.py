"""
Named consistency checks shared by the defect engine and the curve module.

A check is PASS, FAIL or SKIP; SKIP means the condition could not be decided
for this input. Reports carry lists of checks and count as passed when none
of them failed.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

PASS = "PASS"
FAIL = "FAIL"
SKIP = "SKIP"


@dataclass(frozen=True)
class Check:
    """Outcome of one consistency check."""

    name: str
    status: str
    detail: str = ""

    @classmethod
    def of(cls, name: str, condition: Optional[bool], detail: str = "") -> "Check":
        if condition is None:
            return cls(name, SKIP, detail)
        return cls(name, PASS if condition else FAIL, detail)

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def failed_checks(checks: Sequence[Check]) -> List[Check]:
    return [c for c in checks if c.status == FAIL]


def merge_checks(groups: Sequence[Sequence[Check]]) -> List[Check]:
    """Combine per-prime checks: FAIL wins, then PASS; SKIP only when all skipped."""
    merged: Dict[str, List[Check]] = {}
    for checks in groups:
        for c in checks:
            merged.setdefault(c.name, []).append(c)
    out = []
    for name, items in merged.items():
        statuses = {c.status for c in items}
        if FAIL in statuses:
            out.append(Check(name, FAIL, failed_checks(items)[0].detail))
        elif PASS in statuses:
            out.append(Check(name, PASS, next(c.detail for c in items if c.status == PASS)))
        else:
            out.append(Check(name, SKIP, items[0].detail))
    return out
