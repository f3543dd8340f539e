"""Stable text rendering of numbers for CSV, matrices and logs."""

from __future__ import annotations

import math
from enum import Enum
from typing import Any

FLOAT_FORMAT = ".17g"


def format_float(value: float) -> str:
    """17 significant digits; round-trips every double exactly."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, FLOAT_FORMAT)


def format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, float)):
        return format_float(value) if isinstance(value, float) else str(value)
    return str(value)


def finite_or_none(value: float) -> float | None:
    """JSON has no inf/nan; such values are written as null."""
    value = float(value)
    return value if math.isfinite(value) else None
