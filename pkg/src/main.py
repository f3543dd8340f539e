#!/usr/bin/env python3
"""Command-line entry point."""

from __future__ import annotations

import asyncio
import logging
import os
import re
import sys
from typing import Sequence

from dotenv import load_dotenv

from cli import create_parser

logger = logging.getLogger(__name__)


class _CompactFormatter(logging.Formatter):
    """Shortens long numeric arrays that end up in log messages."""

    # Runs of more than six comma/space separated numbers.
    _ARRAY_RE = re.compile(r"((?:[-+]?\d[\d.eE+-]*[,\s]+){6})(?:[-+]?\d[\d.eE+-]*[,\s]+)+([-+]?\d[\d.eE+-]*)")

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        return self._ARRAY_RE.sub(r"\1... \2", text)


def _configure_logging() -> None:
    log_level = os.getenv("LOG_LEVEL", "INFO").upper()
    level = getattr(logging, log_level, logging.INFO)

    # stdout carries CSV/JSON data; logs go to stderr.
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_CompactFormatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))

    root = logging.getLogger()
    root.setLevel(level)
    root.handlers.clear()
    root.addHandler(handler)

    logging.getLogger("aiosqlite").setLevel(logging.WARNING)


async def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    _configure_logging()

    args = create_parser().parse_args(argv)
    logger.debug("Running %s", args.command)
    return await args.handler(args)


if __name__ == "__main__":
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        sys.exit(130)
    except Exception as e:
        print(f"Fatal error: {e}", file=sys.stderr)
        raise
