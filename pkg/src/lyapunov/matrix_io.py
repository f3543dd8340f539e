"""Plain-text covariance format: a ``# modes:`` header, then rows of %.17g values."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from model.errors import ParameterError
from utils.formatting import format_float

from .covariance import CovarianceMatrix

HEADER_PREFIX = "# modes:"


def format_covariance(cov: CovarianceMatrix) -> str:
    lines = [f"{HEADER_PREFIX} {' '.join(cov.modes)}"]
    for row in cov.matrix:
        lines.append(" ".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_covariance(text: str) -> CovarianceMatrix:
    modes: tuple[str, ...] | None = None
    rows: list[list[float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(HEADER_PREFIX):
            modes = tuple(stripped[len(HEADER_PREFIX) :].split())
            continue
        if stripped.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in stripped.split()])
        except ValueError as e:
            raise ParameterError(f"line {lineno}: bad matrix entry ({e})") from e

    if modes is None:
        raise ParameterError("covariance file has no '# modes:' header")
    try:
        return CovarianceMatrix(np.array(rows, dtype=float), modes)
    except ValueError as e:
        raise ParameterError(f"malformed covariance matrix: {e}") from e


def write_covariance(path: str | Path, cov: CovarianceMatrix) -> None:
    Path(path).write_text(format_covariance(cov), encoding="utf-8")


def read_covariance(path: str | Path) -> CovarianceMatrix:
    return parse_covariance(Path(path).read_text(encoding="utf-8"))
