"""Byte-stable serialization: shortest round-trip floats, CSV tables, JSON reports.

Every number written to an output file goes through `fmt_float`, which uses
Python's shortest round-trip repr (up to 17 significant digits, `.` decimal
separator, no locale dependence). Two runs over the same inputs therefore
produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence


def fmt_float(x: float) -> str:
    """Shortest decimal string that round-trips to the same float64."""
    return repr(float(x))


def csv_table(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Render a CSV with '\\n' line endings and round-trip float cells."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _cell(v: object) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def dump_json(obj: object) -> str:
    """Deterministic JSON text: insertion-ordered keys, round-trip floats."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def json_rows(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Same table as `csv_table` rendered as a JSON array of objects."""
    return dump_json([dict(zip(header, row)) for row in rows])
