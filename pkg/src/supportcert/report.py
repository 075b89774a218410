"""Check reports: named sub-assertions with provenance tags."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

PAPER = "PAPER"
DERIVED = "DERIVED"
TRIVIAL = "TRIVIAL"
TAGS = (PAPER, DERIVED, TRIVIAL)


def jsonable(value):
    from .linalg import Matrix
    from .poly import Poly
    from .symbolic import SymPoly

    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, Matrix):
        return [[jsonable(x) for x in r] for r in value.rows]
    if isinstance(value, (Poly, SymPoly)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=repr) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    return str(value)


@dataclass
class CheckReport:
    check_id: str
    summary: str = ""
    details: dict = field(default_factory=dict)
    status: str = "pass"
    duration: float = 0.0

    def record(self, name, value, tag):
        if tag not in TAGS:
            raise ValueError(f"unknown provenance tag {tag!r}")
        self.details[name] = {"value": jsonable(value), "tag": tag}

    def expect(self, name, value, expected, tag):
        ok = value == expected
        self.details[name] = {
            "value": jsonable(value),
            "expected": jsonable(expected),
            "ok": ok,
            "tag": tag,
        }
        if not ok:
            self.status = "fail"
        return ok

    def require(self, name, ok, tag, value=None):
        entry = {"ok": bool(ok), "tag": tag}
        if value is not None:
            entry["value"] = jsonable(value)
        self.details[name] = entry
        if not ok:
            self.status = "fail"
        return ok

    def skip(self, reason):
        if self.status != "fail":
            self.status = "skip"
        self.details["skip_reason"] = {"value": reason, "tag": TRIVIAL}

    @property
    def passed(self):
        return self.status == "pass"

    def failures(self):
        return [k for k, v in self.details.items() if v.get("ok") is False]

    def payload(self):
        """Comparison payload; duration is deliberately left out."""
        return {
            "check": self.check_id,
            "status": self.status,
            "summary": self.summary,
            "details": self.details,
        }

    def to_json(self):
        return json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
