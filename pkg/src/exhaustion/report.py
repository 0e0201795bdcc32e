"""JSON and CSV serialization of quadrature results and tables.

Floats are written with 17 significant digits so every binary64 value
survives a round trip; non-finite floats become JSON ``null`` or an empty CSV
cell.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Sequence

from .core import ConvergenceRow, QuadratureResult

__all__ = [
    "CSV_HEADER",
    "dump_json",
    "emit_report",
    "format_number",
    "parse_report",
    "per_level_table",
    "report_dict",
    "write_csv",
]

CSV_HEADER = ("level", "A_n", "partial", "error_ratio")


def format_number(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if not math.isfinite(v):
        return ""
    return format(v, ".17g")


def dump_json(obj: Any) -> str:
    """Compact JSON with 17-digit floats; keys keep insertion order."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format_number(obj)
        # keep floats floats after json.loads
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dump_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_number(v) if not isinstance(v, str) else v for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def per_level_table(result: QuadratureResult) -> list[ConvergenceRow]:
    """Rows from a result's history; the last row has no successor, so no ratio."""
    terms = [t.value * result.width for t in result.history]
    rows = []
    partial = 0.0
    for i, term in enumerate(terms):
        partial += term
        ratio = abs(terms[i + 1] / term) if i + 1 < len(terms) and term else None
        rows.append(ConvergenceRow(i + 1, term, partial, ratio))
    return rows


def report_dict(result: QuadratureResult, per_level: Sequence[ConvergenceRow] | None = None) -> dict:
    rows = per_level_table(result) if per_level is None else per_level
    return {
        "value": result.value,
        "error_estimate": result.error_estimate,
        "levels_used": result.levels_used,
        "eval_count": result.eval_count,
        "converged": result.converged,
        "termination": result.termination.value,
        "per_level": [
            {"n": r.n, "A_n": r.a_n, "partial": r.partial, "error_ratio": r.error_ratio} for r in rows
        ],
    }


def emit_report(
    result: QuadratureResult,
    fmt: str = "json",
    per_level: Sequence[ConvergenceRow] | None = None,
) -> str:
    """Render ``result`` as JSON or as the per-level CSV table.

    ``per_level`` overrides the table derived from the result's history, e.g.
    with the output of :func:`exhaustion.core.convergence_report`.
    """
    if fmt == "json":
        return dump_json(report_dict(result, per_level)) + "\n"
    if fmt == "csv":
        rows = per_level_table(result) if per_level is None else per_level
        return write_csv(CSV_HEADER, ((r.n, r.a_n, r.partial, r.error_ratio) for r in rows))
    raise ValueError(f"unknown format {fmt!r}")


def parse_report(text: str) -> dict:
    return json.loads(text)
