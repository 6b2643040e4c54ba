"""Deterministic text renderings (json, md, csv) of analysis and sweep reports."""
from __future__ import annotations

import csv
import io
import json
from typing import Any

from .classify_sweep import SweepReport

FORMATS = ("json", "md", "csv")
SWEEP_COLUMNS = ("n", "(a,b,c)", "expected", "observed", "seeds", "pass")


def _as_payload(report: Any) -> Any:
    return report.to_json() if hasattr(report, "to_json") else report


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, (list, tuple)):
        return "(" + ",".join(str(v) for v in value) + ")"
    return str(value)


def sweep_rows(report: SweepReport) -> list[list[str]]:
    """One row per (n, triple) cell, in record order."""
    groups: dict = {}
    for rec in report.records:
        g = groups.setdefault((rec.n, tuple(rec.abc)), {"expected": [], "observed": [], "count": 0, "ok": True})
        for slot, val in (("expected", rec.expected), ("observed", rec.observed)):
            if _fmt(val) not in g[slot]:
                g[slot].append(_fmt(val))
        g["count"] += 1
        g["ok"] = g["ok"] and rec.passed
    rows = []
    for (n, abc), g in groups.items():
        rows.append([str(n), _fmt(abc), "/".join(g["expected"]), "/".join(g["observed"]),
                     str(g["count"]), "pass" if g["ok"] else "FAIL"])
    return rows


def _flat_items(payload: dict) -> list[tuple[str, str]]:
    out = []
    for k in sorted(payload):
        v = payload[k]
        out.append((k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else _fmt(v)))
    return out


def render_report(report: Any, fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if fmt == "json":
        return json.dumps(_as_payload(report), sort_keys=True, indent=2) + "\n"
    if isinstance(report, SweepReport):
        header, rows = list(SWEEP_COLUMNS), sweep_rows(report)
    else:
        header, rows = ["field", "value"], [list(kv) for kv in _flat_items(_as_payload(report))]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    lines = []
    if isinstance(report, SweepReport) and report.label:
        lines += [f"_{report.label}_", ""]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"
