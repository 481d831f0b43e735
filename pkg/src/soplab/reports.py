"""Check records and their deterministic serialization.

Rationals are written as ``"p/q"`` strings, never as decimals.  Records are
emitted sorted by claim identifier and then by their parameters, so a
fixed configuration always produces byte-identical json-lines output.
Wall-clock runtime is kept on the record but only written when asked for,
because it would break that determinism.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

STATUSES = ("pass", "fail", "inconclusive")


class FalsificationError(AssertionError):
    """A computation contradicted a claim that should hold; carries the report."""

    def __init__(self, report: "CheckReport"):
        self.report = report
        super().__init__(f"{report.claim} failed: {report.witness!r}")


@dataclass
class CheckReport:
    claim: str
    status: str
    params: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    witness: Optional[dict] = None
    notes: str = ""
    runtime: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}, got {self.status!r}")
        if self.status == "fail" and not self.witness:
            raise ValueError(f"{self.claim}: a failing report must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def require(self) -> "CheckReport":
        if self.status == "fail":
            raise FalsificationError(self)
        return self

    def to_record(self, timing: bool = False) -> dict:
        rec = {
            "claim": self.claim,
            "status": self.status,
            "params": to_jsonable(self.params),
            "values": to_jsonable(self.values),
            "witness": to_jsonable(self.witness),
        }
        if self.notes:
            rec["notes"] = self.notes
        if timing:
            rec["runtime_s"] = round(self.runtime, 6)
        return rec

    def sort_key(self):
        return (self.claim, json.dumps(to_jsonable(self.params), sort_keys=True))


def to_jsonable(x):
    """Recursively convert rationals to 'p/q' and vectors to sorted rows."""
    from .qlinalg import FSVector

    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        raise TypeError("floats are not allowed in check records")
    if isinstance(x, FSVector):
        return x.serialize()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return f"{int(x.numerator)}/{int(x.denominator)}"
    if hasattr(x, "to_jsonable"):
        return x.to_jsonable()
    return repr(x)


class _Clock:
    elapsed = 0.0


@contextmanager
def timed():
    clock = _Clock()
    t0 = time.perf_counter()
    try:
        yield clock
    finally:
        clock.elapsed = time.perf_counter() - t0


def ordered(reports: Iterable[CheckReport]) -> list[CheckReport]:
    return sorted(reports, key=lambda r: r.sort_key())


def jsonl_text(reports: Iterable[CheckReport], timing: bool = False) -> str:
    lines = [json.dumps(r.to_record(timing), sort_keys=True, separators=(",", ":")) for r in ordered(reports)]
    return "".join(line + "\n" for line in lines)


def summary_text(reports: Iterable[CheckReport]) -> str:
    reports = ordered(reports)
    if not reports:
        return "0 checks\n"
    per_claim: dict[str, Counter] = {}
    for r in reports:
        per_claim.setdefault(r.claim, Counter())[r.status] += 1
    totals = Counter(r.status for r in reports)
    out = [f"{len(reports)} checks: " + ", ".join(f"{totals[s]} {s}" for s in STATUSES)]
    width = max(len(c) for c in per_claim)
    for claim, cnt in per_claim.items():
        out.append(f"  {claim:<{width}}  " + "  ".join(f"{s}={cnt[s]}" for s in STATUSES))
    return "\n".join(out) + "\n"


def emit_report(reports: Iterable[CheckReport], fmt: str = "json-lines", path=None, timing: bool = False) -> str:
    """Render reports; write them to ``path`` when given. Returns the text."""
    reports = list(reports)
    if fmt == "json-lines":
        text = jsonl_text(reports, timing)
    elif fmt == "summary-text":
        text = summary_text(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def exit_code(reports: Iterable[CheckReport]) -> int:
    """0 when everything passed, 1 on any failure, 3 when only inconclusive results remain."""
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return 1
    if "inconclusive" in statuses:
        return 3
    return 0
