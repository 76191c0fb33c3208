from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class CheckError(Exception):
    """A check could not be carried out (as opposed to running and failing)."""


@dataclass
class Verdict:
    """Outcome of one check.

    ``bound`` is the certified order lower bound (or integer factor) the check
    produces, if any; ``details`` carries check-specific data for reports.
    """

    check: str
    passed: bool
    message: str = ""
    bound: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def as_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {"check": self.check, "status": "pass" if self.passed else "fail"}
        if self.bound is not None:
            rec["bound"] = str(self.bound)
        if self.message:
            rec["message"] = self.message
        if self.details:
            rec["details"] = self.details
        return rec
