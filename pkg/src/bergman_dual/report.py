"""Verification reports and their bit-stable JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

CSV_HEADER = ("suite", "check", "claimed", "computed", "tolerance", "pass")


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return f"{x:.12e}"


def _dump(obj) -> str:
    """JSON with sorted keys and every float written as ``%.12e``."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return _dump(obj.item())
    if isinstance(obj, complex):
        return _dump([obj.real, obj.imag])
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _num(x):
    if isinstance(x, str) and x in ("nan", "inf", "-inf"):
        return float(x)
    return float(x)


@dataclass
class Record:
    """One check: ``pass`` is decided by the constructors below."""

    check: str
    claimed: float
    computed: float
    tolerance: float
    passed: bool
    relation: str = "abs"
    note: str = ""

    def __post_init__(self):
        self.claimed = float(self.claimed)
        self.computed = float(self.computed)
        self.tolerance = float(self.tolerance)
        self.passed = bool(self.passed)

    @classmethod
    def equal(cls, check, claimed, computed, tolerance, note=""):
        """Pass iff ``|computed - claimed| <= tolerance``."""
        ok = math.isfinite(computed) and abs(computed - claimed) <= tolerance
        return cls(check, claimed, computed, tolerance, ok, "abs", note)

    @classmethod
    def at_most(cls, check, bound, computed, tolerance, note=""):
        """Pass iff ``computed <= bound + tolerance``."""
        ok = math.isfinite(computed) and computed <= bound + tolerance
        return cls(check, bound, computed, tolerance, ok, "le", note)

    @classmethod
    def within(cls, check, low, high, computed, note=""):
        """Pass iff ``low <= computed <= high``; stored with ``claimed`` the midpoint."""
        ok = math.isfinite(computed) and low <= computed <= high
        return cls(check, 0.5 * (low + high), computed, 0.5 * (high - low), ok, "range", note)

    @classmethod
    def failure(cls, check, exc: Exception):
        return cls(check, math.nan, math.nan, 0.0, False, "error", f"{type(exc).__name__}: {exc}")

    def to_dict(self):
        return {
            "check": self.check,
            "claimed": self.claimed,
            "computed": self.computed,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "relation": self.relation,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["check"], _num(d["claimed"]), _num(d["computed"]), _num(d["tolerance"]),
                   d["pass"], d.get("relation", "abs"), d.get("note", ""))


@dataclass
class VerificationReport:
    suite: str
    records: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    wall_time: float | None = None

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, record: Record) -> Record:
        self.records.append(record)
        return record

    def to_dict(self, include_timing: bool = False):
        d = {
            "suite": self.suite,
            "pass": self.passed,
            "records": [r.to_dict() for r in self.records],
            "environment": self.environment,
            "warnings": list(self.warnings),
            "notes": self.notes,
        }
        if include_timing and self.wall_time is not None:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return _dump(self.to_dict(include_timing)) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        d = json.loads(text)
        return cls(d["suite"], [Record.from_dict(r) for r in d["records"]], d.get("environment", {}),
                   d.get("warnings", []), d.get("notes", {}), d.get("wall_time"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.records:
            writer.writerow([self.suite, r.check, format_float(r.claimed).strip('"'),
                             format_float(r.computed).strip('"'), format_float(r.tolerance).strip('"'),
                             "true" if r.passed else "false"])
        return buf.getvalue()


def emit(report: VerificationReport, fmt: str = "json", path=None, include_timing: bool = False) -> str:
    """Serialize ``report``; write to ``path`` when given.  Returns the text."""
    if fmt == "json":
        text = report.to_json(include_timing)
    elif fmt == "csv":
        text = report.to_csv()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
