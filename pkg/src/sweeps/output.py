"""CSV and JSON emission of sweep tables."""

from __future__ import annotations

import csv
import io
import json
from enum import Enum
from typing import Any, Iterable, Sequence

from utils.formatting import format_cell


def rows_to_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    """RFC 4180 style: CRLF line endings, minimal quoting, %.17g floats, empty for null."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _json_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, float):
        return float(value)
    return str(value)


def rows_to_json(
    columns: Sequence[str],
    rows: Iterable[dict[str, Any]],
    *,
    name: str | None = None,
    cache_key: str | None = None,
) -> str:
    payload = {
        "name": name,
        "cache_key": cache_key,
        "columns": list(columns),
        "rows": [{c: _json_value(row.get(c)) for c in columns} for row in rows],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"
