"""Result emission: CSV/JSON tables with embedded provenance.

CSV dialect is fixed: comma separator, '.' decimal point, LF line endings,
UTF-8, one header row, numbers at 17 significant digits.  Every CSV gets a
sibling <stem>.meta.json carrying the resolved scenario and the summary; a
JSON emission carries table, scenario, and summary in one file.  Identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _native(obj):
    if isinstance(obj, dict):
        return {k: _native(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_native(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def write_csv(table: dict, path) -> Path:
    """Write a column table to CSV; returns the path written."""
    path = Path(path)
    columns = list(table)
    rows = zip(*(table[c] for c in columns))
    lines = [",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def write_meta(scenario_config: dict, summary: dict, path) -> Path:
    path = Path(path)
    payload = {"scenario": _native(scenario_config), "summary": _native(summary)}
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8",
                    newline="\n")
    return path


def write_json(table: dict, scenario_config: dict, summary: dict, path) -> Path:
    """Write table + resolved scenario + summary as one JSON document."""
    path = Path(path)
    payload = {
        "scenario": _native(scenario_config),
        "summary": _native(summary),
        "columns": list(table),
        "rows": [list(map(float, row)) for row in zip(*table.values())],
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8",
                    newline="\n")
    return path


def read_json_table(path) -> dict:
    """Rebuild the column table from a JSON emission (round-trip helper)."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    columns = payload["columns"]
    rows = payload["rows"]
    return {c: [row[i] for row in rows] for i, c in enumerate(columns)}
