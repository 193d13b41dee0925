"""Pass/fail bookkeeping for symbolic identity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List


@dataclass
class CheckResult:
    identity: str
    sample: str
    passed: bool
    discrepancy: str = ""


@dataclass
class Report:
    results: List[CheckResult] = field(default_factory=list)
    notes: Dict[str, str] = field(default_factory=dict)

    def add(self, identity: str, sample, residual):
        ok = residual.is_zero()
        self.results.append(CheckResult(identity, sample.to_str(), ok, "" if ok else residual.to_str()))

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def failed(self) -> int:
        return sum(not r.passed for r in self.results)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def extend(self, other: Report):
        self.results.extend(other.results)
        self.notes.update(other.notes)

    def summary(self) -> Dict[str, Dict[str, int]]:
        out: Dict[str, Dict[str, int]] = {}
        for r in self.results:
            d = out.setdefault(r.identity, {"passed": 0, "failed": 0})
            d["passed" if r.passed else "failed"] += 1
        return out

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "identities": self.summary(),
            "failures": [r.__dict__ for r in self.results if not r.passed],
            "notes": dict(self.notes),
        }
