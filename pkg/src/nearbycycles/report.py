"""Assertion records shared by the verifiers and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass(frozen=True)
class Record:
    suite: str
    check: str
    location: dict[str, Any] = field(default_factory=dict)
    passed: bool = True
    detail: str = ""

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


class Report:
    """Ordered collection of records for one suite."""

    def __init__(self, suite: str):
        self.suite = suite
        self.records: list[Record] = []

    def add(self, check: str, passed: bool, detail: str = "", **location: Any) -> bool:
        self.records.append(Record(self.suite, check, dict(location), bool(passed), detail))
        return bool(passed)

    def expect_equal(self, check: str, got: Any, want: Any, **location: Any) -> bool:
        ok = got == want
        return self.add(check, ok, "" if ok else f"got {got!r}, expected {want!r}", **location)

    def extend(self, other: Report | list[Record]) -> None:
        recs = other.records if isinstance(other, Report) else other
        self.records.extend(recs)

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __len__(self) -> int:
        return len(self.records)
