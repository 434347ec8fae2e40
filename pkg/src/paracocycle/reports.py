"""Versioned JSON/CSV report records.

Certified values carry their rounding mode, estimates carry ``estimate: true``,
and the two never share a key. Floats are written in shortest round-trip
form; non-finite floats become the strings "inf", "-inf" and "nan". The
``wall_time`` field is the only part of a record that varies between runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Sequence

import numpy as np

SCHEMA_VERSION = 1
OUTWARD = "outward"


def certified(lower: float, upper: float, method: str, rounding: str = OUTWARD, **extra) -> dict:
    return {"lower": lower, "upper": upper, "rounding": rounding, "method": method, **extra}


def certified_value(value, method: str, rounding: str = "exact", **extra) -> dict:
    return {"value": value, "rounding": rounding, "method": method, **extra}


def estimate(value, method: str, **extra) -> dict:
    return {"value": value, "estimate": True, "method": method, **extra}


def _plain(obj: Any) -> Any:
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


@dataclass
class ReportRecord:
    command: str
    inputs: dict
    certified: dict = field(default_factory=dict)
    estimates: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    wall_time: float = 0.0
    error: dict | None = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        self.check()

    def check(self) -> None:
        shared = set(self.certified) & set(self.estimates)
        if shared:
            raise ValueError(f"certified and estimate fields share keys: {sorted(shared)}")

    def to_dict(self, wall_time: bool = True) -> dict:
        self.check()
        out = {"schema_version": self.schema_version, "command": self.command,
               "inputs": self.inputs, "certified": self.certified, "estimates": self.estimates,
               "provenance": self.provenance, "diagnostics": self.diagnostics}
        if self.error is not None:
            out["error"] = self.error
        if wall_time:
            out["wall_time"] = self.wall_time
        return _plain(out)

    def to_json(self, wall_time: bool = True) -> str:
        return json.dumps(self.to_dict(wall_time), sort_keys=True, indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        """One row per certified or estimated scalar: key,lower,upper,value,estimate."""
        rows = []
        for key, v in sorted(self.certified.items()):
            if isinstance(v, dict):
                rows.append([key, v.get("lower", ""), v.get("upper", ""), v.get("value", ""), False])
        for key, v in sorted(self.estimates.items()):
            if isinstance(v, dict):
                rows.append([key, "", "", v.get("value", ""), True])
        return write_csv(["key", "lower", "upper", "value", "estimate"], rows)


def write_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_csv_cell(c) for c in r])
    return buf.getvalue()


def _csv_cell(c):
    c = _plain(c)
    if isinstance(c, float):
        return repr(c)
    if isinstance(c, (list, dict)):
        return json.dumps(c, sort_keys=True)
    return c


CURVE_HEADER = ("t", "lower", "upper", "estimate", "regime")


def strip_wall_time(text: str) -> str:
    """The JSON text with the wall_time field removed, for byte comparisons."""
    data = json.loads(text)
    data.pop("wall_time", None)
    return json.dumps(data, sort_keys=True, indent=2)
