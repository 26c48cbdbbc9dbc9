"""Metric records, their CSV/JSON serialization, and measurement cadence.

Every experiment emits rows with the same fixed column set so plots can
be built from any mix of algorithms.  Serialization is deterministic:
floats are written with ``repr`` (shortest round-trip form), missing
fields as empty strings, rows in the order produced, and summaries as
sorted-key JSON.  Two runs of the same configuration must produce
byte-identical files, which is why wall-clock times are zeroed unless a
run explicitly opts into timing.
"""

from __future__ import annotations

import json
from pathlib import Path

SCHEMA_VERSION = 1

CSV_COLUMNS = ("algo", "game", "seed", "outer_iter", "inner_iter",
               "nodes_visited", "exploitability", "pop1", "pop2",
               "restricted_states", "wall_ms")

# Exploitability is a max over a set containing the profile value, so it
# is nonnegative up to accumulated float error.
EXPLOIT_FLOOR = -1e-9


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def check_rows(rows) -> None:
    """Enforce the row invariants: known columns only, visit counts
    non-decreasing, exploitability above the float-error floor."""
    last_nodes = None
    for i, row in enumerate(rows):
        unknown = set(row) - set(CSV_COLUMNS)
        if unknown:
            raise ValueError(f"row {i}: unknown columns {sorted(unknown)}")
        nodes = row.get("nodes_visited")
        if nodes is not None:
            if last_nodes is not None and nodes < last_nodes:
                raise ValueError(
                    f"row {i}: nodes_visited decreased "
                    f"({last_nodes} -> {nodes})")
            last_nodes = nodes
        e = row.get("exploitability")
        if e is not None and e < EXPLOIT_FLOOR:
            raise ValueError(f"row {i}: exploitability {e} below floor")


def write_rows_csv(path, rows) -> None:
    """Write metric rows (dicts keyed by CSV_COLUMNS) with a fixed
    header, unix newlines, and deterministic cell formatting."""
    check_rows(rows)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(format_cell(row.get(c)) for c in CSV_COLUMNS))
    path.write_text("\n".join(lines) + "\n")


def read_rows_csv(path) -> list[dict]:
    """Inverse of write_rows_csv; numeric cells come back typed and
    empty cells come back as None."""
    text = Path(path).read_text()
    lines = text.strip("\n").split("\n")
    header = tuple(lines[0].split(","))
    if header != CSV_COLUMNS:
        raise ValueError(f"unexpected header {header}")
    out = []
    for line in lines[1:]:
        row = {}
        for col, cell in zip(CSV_COLUMNS, line.split(",")):
            if cell == "":
                row[col] = None
            elif col in ("exploitability", "wall_ms"):
                row[col] = float(cell)
            elif col in ("algo", "game"):
                row[col] = cell
            else:
                row[col] = int(cell)
        out.append(row)
    return out


def write_summary_json(path, summary: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(summary, schema_version=SCHEMA_VERSION)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def cadence_thresholds(start: int = 10_000, factor: int = 2):
    """Node counts at which to measure: start, start*factor, ... so a
    log-x curve gets evenly spaced points at constant cost."""
    if start < 1 or factor < 2:
        raise ValueError("cadence needs start >= 1 and factor >= 2")
    t = int(start)
    while True:
        yield t
        t *= factor
