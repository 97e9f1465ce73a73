"""Deterministic JSON / CSV rendering of experiment reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SIGNIFICANT_DIGITS = 15
COMPLEX_ZERO_TOL = 1e-15  # float noise in complex parts is written as 0


class ReportFormatError(ValueError):
    pass


@dataclass
class ReportFile:
    metadata: dict[str, Any]
    results: dict[str, Any]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def is_tabular(self) -> bool:
        return isinstance(self.results.get("rows"), list) and "columns" in self.results

    def to_dict(self) -> dict[str, Any]:
        return {"metadata": self.metadata, "results": self.results, "diagnostics": self.diagnostics}


def _round(x: float) -> float:
    if not math.isfinite(x):
        raise ReportFormatError(f"non-finite number {x!r} in report")
    r = float(f"{x:.{SIGNIFICANT_DIGITS}g}")
    return 0.0 if r == 0 else r  # drop negative zero


def to_plain(obj: Any) -> Any:
    """Recursively convert numpy / complex values into JSON-ready Python values."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        re, im = (0.0 if abs(x) < COMPLEX_ZERO_TOL else x for x in (obj.real, obj.imag))
        return [_round(re), _round(im)]
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if obj is None or isinstance(obj, str):
        return obj
    raise ReportFormatError(f"cannot serialize {type(obj).__name__}")


def _cell(v: Any) -> str:
    v = to_plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(v, (list, dict)):
        raise ReportFormatError("CSV cells must be scalars")
    return "" if v is None else str(v)


def emit_report(r: ReportFile, fmt: str = "json") -> bytes:
    """Render ``r``: JSON with sorted keys, or CSV of ``results['rows']``."""
    if fmt == "json":
        text = json.dumps(to_plain(r.to_dict()), sort_keys=True, indent=2, ensure_ascii=False)
        return (text + "\n").encode("utf-8")
    if fmt == "csv":
        if not r.is_tabular:
            raise ReportFormatError("CSV output needs a tabular (sweep) payload")
        columns = list(r.results["columns"])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in r.results["rows"]:
            w.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue().encode("utf-8")
    raise ReportFormatError(f"unsupported format {fmt!r}; expected json or csv")
