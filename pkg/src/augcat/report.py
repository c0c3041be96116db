"""Structured check results shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Finding:
    kind: str
    message: str
    data: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out = {"kind": self.kind, "message": self.message}
        if self.data:
            out["data"] = self.data
        return out


@dataclass
class Report:
    """Outcome of a check; ``findings`` holds violations only."""

    command: str
    findings: list[Finding] = field(default_factory=list)
    tables: dict[str, Any] = field(default_factory=dict)
    status_override: str | None = None

    def add(self, kind: str, message: str, **data: Any) -> None:
        self.findings.append(Finding(kind, message, data))

    def extend(self, other: "Report") -> None:
        self.findings.extend(other.findings)

    @property
    def ok(self) -> bool:
        return not self.findings and self.status_override is None

    @property
    def status(self) -> str:
        if self.status_override:
            return self.status_override
        return "pass" if not self.findings else "fail"

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "status": self.status,
            "findings": [f.to_dict() for f in self.findings],
            "tables": self.tables,
        }

    def __bool__(self) -> bool:
        return self.ok
