"""Structured check reports with deterministic rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
INFO = "informational"


@dataclass(frozen=True)
class CheckEntry:
    check_id: str
    tag: str
    status: str
    witness: str = ""
    residual: str = ""


@dataclass
class Report:
    suite: str
    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, check_id: str, tag: str, status: str, witness: str = "", residual: str = "") -> None:
        self.entries.append(CheckEntry(check_id, tag, status, witness, residual))

    def add_pass(self, check_id: str, tag: str, witness: str = "") -> None:
        self.add(check_id, tag, PASS, witness)

    def add_fail(self, check_id: str, tag: str, witness: str, residual: str) -> None:
        self.add(check_id, tag, FAIL, witness, residual)

    def add_info(self, check_id: str, tag: str, witness: str = "", residual: str = "") -> None:
        self.add(check_id, tag, INFO, witness, residual)

    def merge(self, other: "Report") -> None:
        self.entries.extend(other.entries)

    def count(self, status: str) -> int:
        return sum(1 for e in self.entries if e.status == status)

    @property
    def ok(self) -> bool:
        return self.count(FAIL) == 0

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if e.status == FAIL]

    def failed_check_ids(self) -> list[str]:
        seen: list[str] = []
        for e in self.failures():
            if e.check_id not in seen:
                seen.append(e.check_id)
        return seen

    def to_text(self) -> str:
        lines = [f"suite: {self.suite}"]
        for e in self.entries:
            line = f"  [{e.status}] {e.check_id} ({e.tag})"
            if e.witness:
                line += f" witness={e.witness}"
            if e.residual:
                line += f" residual={e.residual}"
            lines.append(line)
        lines.append(
            f"summary: {self.count(PASS)} pass, {self.count(FAIL)} fail, "
            f"{self.count(INFO)} informational"
        )
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {
            "suite": self.suite,
            "entries": [
                {
                    "check_id": e.check_id,
                    "tag": e.tag,
                    "status": e.status,
                    "witness": e.witness,
                    "residual": e.residual,
                }
                for e in self.entries
            ],
            "summary": {
                "pass": self.count(PASS),
                "fail": self.count(FAIL),
                "informational": self.count(INFO),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2) + "\n"
