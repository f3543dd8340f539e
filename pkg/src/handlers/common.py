"""Shared handler utilities."""

from __future__ import annotations

import argparse
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Awaitable, Callable, Sequence

from model.config import RunConfig, load_config
from model.errors import CalibrationError, NoStationaryStateError, NumericalError, ParameterError
from sweeps.output import rows_to_csv, rows_to_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

Handler = Callable[[argparse.Namespace], Awaitable[int]]


def load_run_config(args: argparse.Namespace) -> RunConfig:
    return load_config(getattr(args, "config", None), getattr(args, "set", None) or ())


def command(func: Handler) -> Handler:
    """Map pipeline exceptions to a one-line diagnostic and an exit code."""

    @functools.wraps(func)
    async def wrapper(args: argparse.Namespace) -> int:
        try:
            return await func(args)
        except ParameterError as e:
            logger.error("Invalid input: %s", e)
            print(f"error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except (NoStationaryStateError, NumericalError, CalibrationError) as e:
            logger.error("%s: %s", type(e).__name__, e)
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_FAILURE

    return wrapper


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def emit_table(
    columns: Sequence[str],
    rows: Sequence[dict[str, Any]],
    out_prefix: str | None,
    *,
    name: str | None = None,
    csv_text: str | None = None,
    json_text: str | None = None,
) -> None:
    """Write PREFIX.csv and PREFIX.json, or the CSV to stdout when no prefix is given."""
    csv_text = csv_text if csv_text is not None else rows_to_csv(columns, rows)
    if out_prefix is None:
        sys.stdout.write(csv_text)
        return

    json_text = json_text if json_text is not None else rows_to_json(columns, rows, name=name)
    prefix = Path(out_prefix)
    write_text(prefix.with_name(prefix.name + ".csv"), csv_text)
    write_text(prefix.with_name(prefix.name + ".json"), json_text)
    logger.info("Wrote %s.csv and %s.json", prefix, prefix)


def emit_document(document: dict[str, Any], out_prefix: str | None, table: tuple[Sequence[str], Sequence[dict[str, Any]]] | None = None) -> None:
    """Write a JSON document (stdout, or PREFIX.json plus an optional PREFIX.csv table)."""
    try:
        text = json.dumps(document, indent=2, allow_nan=False) + "\n"
    except ValueError as e:
        raise NumericalError(f"result document holds a non-finite value: {e}") from e
    if out_prefix is None:
        sys.stdout.write(text)
        return

    prefix = Path(out_prefix)
    write_text(prefix.with_name(prefix.name + ".json"), text)
    if table is not None:
        columns, rows = table
        write_text(prefix.with_name(prefix.name + ".csv"), rows_to_csv(columns, rows))
    logger.info("Wrote results under %s", prefix)
