from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Verdict:
    """Outcome of a verification predicate.

    ``failures`` holds one JSON-ready dict per violated instance; the first
    entry names the first differing matrix slot when one exists.
    """

    name: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def record(self, ok: bool, **detail):
        self.checked += 1
        if not ok:
            self.failures.append(detail)

    def merge(self, other: Verdict) -> Verdict:
        self.checked += other.checked
        self.failures.extend({"check": other.name, **f} for f in other.failures)
        return self

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures}
        if self.skipped:
            out["skipped"] = self.skipped
        return out
