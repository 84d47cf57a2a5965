"""Render module results as text tables, CSV or JSON.

Output is deterministic: keys keep a fixed order, floats are printed with
``repr`` precision, and nothing time- or host-dependent is included.
"""

from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np

from .weights import WeightConditionReport

FORMATS = ("TEXT", "CSV", "JSON")


def _clean(obj):
    """Convert results to plain JSON-compatible structures."""
    if hasattr(obj, "to_dict"):
        return _clean(obj.to_dict())
    if isinstance(obj, WeightConditionReport):
        return _clean(condition_report_dict(obj))
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if hasattr(obj, "_asdict"):
        return _clean(obj._asdict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def condition_report_dict(rep: WeightConditionReport) -> dict:
    out = {
        "condition_id": rep.condition_id,
        "family": rep.family,
        "parameter_L_or_M": float(rep.parameter),
        "n_max": rep.n_max,
        "verdict": rep.verdict,
        "min_slack": rep.min_slack,
        "argmin_slack": rep.argmin_slack,
        "tail_note": rep.tail_note,
    }
    if rep.e_value is not None:
        out["E"] = float(rep.e_value)
    if rep.p is not None:
        out["p"] = float(rep.p)
    out["per_index_slack"] = [[n, s] for n, s in rep.per_index_slack]
    return out


def to_json(result) -> str:
    return json.dumps(_clean(result), indent=2, ensure_ascii=False) + "\n"


def _rows(data: dict):
    """(header, rows) of the per-sample / per-index table of a cleaned result."""
    if "samples" in data:
        return ["parameter", "N", "ratio"], [[s["parameter"], s["N"], s["ratio"]] for s in data["samples"]]
    if "per_k_values" in data:
        return ["k", "s_k"], data["per_k_values"]
    if "per_index_slack" in data:
        return ["n", "slack"], data["per_index_slack"]
    if "rows" in data:
        rows = data["rows"]
        header = list(rows[0]) if rows else []
        return header, [[r[h] for h in header] for r in rows]
    return ["key", "value"], [[k, v] for k, v in data.items() if not isinstance(v, (dict, list))]


def to_csv(result) -> str:
    data = _clean(result)
    header, rows = _rows(data)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _table(header, rows, highlight=None):
    cells = [[_fmt(v) for v in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for i, r in enumerate(cells):
        mark = "  <- min" if highlight is not None and i == highlight else ""
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)) + mark)
    return lines


def _pairs(d, prefix=""):
    # one level of nesting is spelled out, e.g. params.p=0.5
    for k, v in d.items():
        if isinstance(v, dict):
            yield from _pairs(v, f"{prefix}{k}.")
        elif not isinstance(v, list):
            yield f"{prefix}{k}={_fmt(v)}"


def to_text(result, max_rows: int = 50) -> str:
    data = _clean(result)
    lines = []
    for k, v in data.items():
        if isinstance(v, (dict, list)):
            continue
        lines.append(f"{k}: {_fmt(v)}")
    for k, v in data.items():
        if isinstance(v, dict) and k not in ("diagnostics",):
            lines.append(f"{k}: " + ", ".join(_pairs(v)))
    if "diagnostics" in data:
        d = data["diagnostics"]
        lines.append("diagnostics: " + ", ".join(f"{kk}={_fmt(vv)}" for kk, vv in d.items() if not isinstance(vv, (dict, list))))
    header, rows = _rows(data)
    if rows and header != ["key", "value"]:
        highlight = None
        if header[-1] in ("slack", "s_k"):
            vals = [r[-1] for r in rows]
            highlight = min(range(len(vals)), key=lambda i: (vals[i], i))
        shown = rows
        if len(rows) > max_rows:
            keep = sorted({*range(max_rows // 2), *range(len(rows) - max_rows // 2, len(rows))}
                          | ({highlight} if highlight is not None else set()))
            shown = [rows[i] for i in keep]
            highlight = keep.index(highlight) if highlight is not None else None
            lines.append(f"({len(rows)} rows, showing {len(shown)})")
        lines.extend(_table(header, shown, highlight))
    return "\n".join(lines) + "\n"


def render(result, fmt: str = "TEXT") -> str:
    fmt = fmt.upper()
    if fmt == "JSON":
        return to_json(result)
    if fmt == "CSV":
        return to_csv(result)
    if fmt == "TEXT":
        return to_text(result)
    raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")


def emit_report(result, fmt: str = "TEXT", path=None, stream=None) -> str:
    """Render and write to ``path`` (or ``stream``); returns the rendered text."""
    text = render(result, fmt)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    elif stream is not None:
        stream.write(text)
    return text
