"""Verdict containers shared by the verification routines and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List


@dataclass(frozen=True)
class Entry:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    """A list of pass/fail entries about one subject.  Failures are data, not exceptions."""

    subject: str
    entries: List[Entry] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, **details) -> bool:
        self.entries.append(Entry(name, bool(passed), details))
        return bool(passed)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: "Report") -> None:
        self.entries.extend(other.entries)
        self.notes.extend(other.notes)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> List[Entry]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "entries": [{"name": e.name, "passed": e.passed, "details": jsonable(e.details)}
                        for e in self.entries],
            "notes": list(self.notes),
        }


def jsonable(x):
    """Recursively convert Fractions, tuples and other exact values to JSON-friendly data."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    return str(x)
