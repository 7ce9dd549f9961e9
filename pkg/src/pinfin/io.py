"""Deterministic CSV/JSON emission and profile round-tripping.

All files are strict SI with units in the header row.  Floats are printed
with 17 significant digits so that re-ingestion is bit-exact; identical
inputs produce identical bytes.
"""

import json
from pathlib import Path

import numpy as np

from .errors import ConfigError

SCHEMA_VERSION = 1
_FMT = "%.17g"


def format_float(v: float) -> str:
    return _FMT % float(v)


def write_table(path: Path, header: list[str], columns: list[np.ndarray],
                comment: str | None = None, fmt: str = "csv") -> None:
    """Write named columns as CSV (or a JSON object of arrays)."""
    path = Path(path)
    n = max(len(c) for c in columns)
    if fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION}
        for name, col in zip(header, columns):
            payload[name] = [float(v) for v in col]
        if comment:
            payload["comment"] = comment
        write_json(path.with_suffix(".json"), payload)
        return
    lines = []
    if comment:
        lines.append("# " + comment)
    lines.append(",".join(header))
    for i in range(n):
        cells = []
        for col in columns:
            cells.append(format_float(col[i]) if i < len(col) else "nan")
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def read_table(path: Path) -> dict[str, np.ndarray]:
    lines = [ln for ln in Path(path).read_text().splitlines()
             if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ConfigError(f"{path}: empty table")
    names = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    cols = {}
    for j, name in enumerate(names):
        vals = np.array([float(r[j]) for r in rows])
        cols[name] = vals[~np.isnan(vals)] if np.any(np.isnan(vals)) else vals
    return cols


def write_json(path: Path, payload: dict) -> None:
    payload = dict(payload)
    payload.setdefault("schema_version", SCHEMA_VERSION)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
