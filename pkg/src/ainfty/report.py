"""Pass/fail reports shared by every checker.

A Report is an ordered list of named checks.  Failing entries carry the
lexicographically first witness (in basis order) plus a failure count, so
reruns produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class CheckEntry:
    name: str
    passed: bool
    witness: Optional[str] = None
    detail: Optional[str] = None
    failures: int = 0

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail is not None:
            out["detail"] = self.detail
        if self.failures:
            out["failures"] = self.failures
        return out


@dataclass
class Report:
    title: str
    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: Optional[str] = None,
            detail: Optional[str] = None, failures: int = 0) -> CheckEntry:
        entry = CheckEntry(name, passed, witness, detail, failures)
        self.entries.append(entry)
        return entry

    def merge(self, other: "Report", prefix: str = ""):
        for e in other.entries:
            self.entries.append(CheckEntry(prefix + e.name, e.passed, e.witness,
                                           e.detail, e.failures))

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def first_failure(self) -> Optional[CheckEntry]:
        for e in self.entries:
            if not e.passed:
                return e
        return None

    def summary(self) -> str:
        lines = [f"[{'PASS' if self.ok else 'FAIL'}] {self.title}"]
        for e in self.entries:
            line = f"  {'ok  ' if e.passed else 'FAIL'} {e.name}"
            if not e.passed and e.witness:
                line += f"  witness={e.witness}"
            if not e.passed and e.failures > 1:
                line += f"  ({e.failures} failures)"
            lines.append(line)
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok,
                "checks": [e.to_json() for e in self.entries]}
