"""Canonical JSON reports, input hashing, and figure rendering.

Reports are serialized with sorted keys and fixed separators so that
identical run configurations produce byte-identical files; timing is
only added on request and is the one field excluded from that contract.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Any

SCHEMA = "finram-report/1"


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if hasattr(value, "to_dict"):
        return _jsonable(value.to_dict())
    return str(value)


def canonical_json(obj: Any) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":")) + "\n"


def input_hashes(paths_or_texts: dict[str, str]) -> dict[str, str]:
    return {
        name: hashlib.sha256(text.encode("utf-8")).hexdigest()
        for name, text in paths_or_texts.items()
    }


def build_report(command: str, result: Any, inputs: dict[str, str] | None = None,
                 elapsed_ms: float | None = None) -> dict:
    report = {
        "schema": SCHEMA,
        "command": command,
        "inputs": input_hashes(inputs or {}),
        "result": _jsonable(result),
    }
    if elapsed_ms is not None:
        report["elapsed_ms"] = round(elapsed_ms, 3)
    return report


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "elapsed_ms"}


def write_json(path: str | Path, report: dict) -> None:
    Path(path).write_text(canonical_json(report), encoding="utf-8")


# ---------------------------------------------------------------------------
# Suite exports: one CSV of per-case rows plus a figure per suite.

def write_suite_csv(path: str | Path, rows: list[dict]) -> None:
    fields: list[str] = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in fields})


def render_suite_figure(path: str | Path, suite: str, rows: list[dict]) -> None:
    """A per-case chart of the two compared quantities, annotated with the
    pass/fail count.  Skips silently when a suite has no numeric rows."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    numeric = [r for r in rows if isinstance(r.get("lhs"), int) and isinstance(r.get("rhs"), int)]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.35 * len(numeric) + 2), 3.2))
    if numeric:
        xs = range(len(numeric))
        ax.plot(xs, [r["lhs"] for r in numeric], "o", label="left side", markersize=4)
        ax.plot(xs, [r["rhs"] for r in numeric], "x", label="right side", markersize=5)
        ax.set_xlabel("case")
        ax.set_ylabel("value")
        ax.legend(loc="best", fontsize=8)
    ok = sum(1 for r in rows if r.get("holds") in (True, "True"))
    ax.set_title(f"{suite}: {ok}/{len(rows)} cases hold", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
