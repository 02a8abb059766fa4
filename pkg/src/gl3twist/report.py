"""Check records and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

COLUMNS = ("suite", "check_id", "paper_anchor", "params", "value_re", "value_im", "bound", "ratio", "pass")


def _clean(x: float | None) -> float | None:
    """JSON has no inf/nan; report them as null."""
    if x is None or not math.isfinite(x):
        return None
    return float(x)


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    check_id: str
    anchor: str
    params: dict[str, Any]
    value: complex
    bound: float | None
    passed: bool

    @property
    def ratio(self) -> float | None:
        if self.bound is None or self.bound == 0:
            return None
        return abs(self.value) / self.bound

    def to_dict(self) -> dict[str, Any]:
        v = complex(self.value)
        return {"suite": self.suite, "check_id": self.check_id, "paper_anchor": self.anchor,
                "params": self.params, "value_re": _clean(v.real), "value_im": _clean(v.imag),
                "bound": _clean(self.bound), "ratio": _clean(self.ratio), "pass": bool(self.passed)}


def record(suite: str, check_id: str, anchor: str, params: dict[str, Any], value: complex,
           bound: float | None, passed: bool | None = None) -> CheckRecord:
    """A record that passes iff |value| <= bound, unless ``passed`` is given explicitly."""
    if passed is None:
        passed = bound is not None and abs(value) <= bound
    return CheckRecord(suite, check_id, anchor, dict(params), complex(value), bound, bool(passed))


@dataclass
class Report:
    suite: str
    records: list[CheckRecord] = field(default_factory=list)
    generated_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def to_dict(self, with_timestamp: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"suite": self.suite}
        if with_timestamp:
            out["generated_at"] = self.generated_at
        out["records"] = [r.to_dict() for r in self.records]
        out["all_pass"] = self.all_pass
        return out

    def to_json(self, with_timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(with_timestamp), indent=1, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in self.records:
            d = r.to_dict()
            d["params"] = json.dumps(d["params"], sort_keys=True)
            writer.writerow(["" if d[c] is None else d[c] for c in COLUMNS])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def comparable(report_json: str) -> dict[str, Any]:
    """A parsed report with the timestamp dropped, for run-to-run comparison."""
    d = json.loads(report_json)
    d.pop("generated_at", None)
    return d
