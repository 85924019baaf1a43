"""CSV and JSON serialization with reproducible formatting.

Floats are rendered with 17 significant digits, which round-trips IEEE-754
doubles bit-exactly; lines end with '\n'; the header row comes first; rows
keep the caller's order. Quoting follows RFC 4180.
"""

from __future__ import annotations

import csv
import io
import json
import numbers

import numpy as np

FLOAT_FORMAT = ".17g"


def format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def emit_csv(header, rows) -> str:
    """Serialize a rectangular table to CSV text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    width = len(header)
    for row in rows:
        cells = [format_cell(value) for value in row]
        if len(cells) != width:
            raise ValueError(
                f"row width {len(cells)} does not match header width {width}")
        writer.writerow(cells)
    return buffer.getvalue()


def emit_json(payload) -> str:
    """Serialize a summary object to deterministic, human-readable JSON."""
    return json.dumps(payload, indent=2, sort_keys=True,
                      allow_nan=True) + "\n"
