"""Report documents and their JSON / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

SIG_DIGITS = 12
STATUSES = ("pass", "fail", "skip")


@dataclass
class Check:
    name: str
    status: str
    measured: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    witness: dict | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}")
        if not (self.measured and self.bounds) and not self.witness:
            raise ValueError(f"check {self.name!r} needs a measured/bound pair or a witness")

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "measured": self.measured,
                "bounds": self.bounds, "witness": self.witness}


@dataclass
class ReportDocument:
    suite: str
    anchor: str
    config: dict
    checks: list
    elapsed_ms: float
    version: str

    def __post_init__(self):
        if not self.checks:
            raise ValueError("a report needs at least one check")

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "anchor": self.anchor, "config": self.config,
                "checks": [c.as_dict() for c in self.checks],
                "elapsed_ms": self.elapsed_ms, "version": self.version,
                "passed": self.passed}


def _clean(value):
    """JSON-ready copy: 12 significant digits, arrays to lists, non-finite to strings."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return _clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
        v = float(f"{v:.{SIG_DIGITS}g}")
        return 0.0 if v == 0 else v
    return value


def to_json(doc: ReportDocument) -> str:
    return json.dumps(_clean(doc.as_dict()), sort_keys=True, indent=2) + "\n"


def checks_json(doc: ReportDocument) -> str:
    """Canonical serialization of the check records alone (no timing)."""
    return json.dumps(_clean([c.as_dict() for c in doc.checks]), sort_keys=True)


CSV_FIELDS = ("suite", "anchor", "name", "status", "measured", "bounds", "witness")


def to_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for c in doc.checks:
        d = _clean(c.as_dict())
        writer.writerow([doc.suite, doc.anchor, d["name"], d["status"],
                         json.dumps(d["measured"], sort_keys=True),
                         json.dumps(d["bounds"], sort_keys=True),
                         json.dumps(d["witness"], sort_keys=True)])
    return buf.getvalue()


def emit_report(doc: ReportDocument, format: str = "json", path=None) -> str:
    """Serialize ``doc``; write to ``path`` when given. ``OSError`` propagates."""
    if format == "json":
        text = to_json(doc)
    elif format == "csv":
        text = to_csv(doc)
    else:
        raise ValueError(f"unknown report format {format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
