from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of a verification; truthy iff it passed."""

    name: str
    passed: bool
    details: str = ""
    witnesses: list[str] = field(default_factory=list)
    children: list[CheckReport] = field(default_factory=list)

    def __bool__(self):
        return self.passed

    @classmethod
    def combine(cls, name: str, children: list[CheckReport], details: str = "") -> CheckReport:
        failed = [c for c in children if not c.passed]
        witnesses = [w for c in failed for w in c.witnesses]
        if not details and failed:
            details = "; ".join(f"{c.name}: {c.details}" for c in failed)
        return cls(name, not failed, details, witnesses, list(children))

    def first_failure(self) -> CheckReport | None:
        if self.passed:
            return None
        for c in self.children:
            f = c.first_failure()
            if f is not None:
                return f
        return self

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "details": self.details}
        if self.witnesses:
            out["witnesses"] = list(self.witnesses)
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def __str__(self):
        mark = "PASS" if self.passed else "FAIL"
        tail = f" ({self.details})" if self.details else ""
        return f"[{mark}] {self.name}{tail}"
