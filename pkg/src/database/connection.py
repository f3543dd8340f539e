"""Sweep cache connection and transaction helpers."""

from __future__ import annotations

import os
import sqlite3
from contextlib import asynccontextmanager
from pathlib import Path
from typing import AsyncIterator

import aiosqlite

CACHE_FILENAME = "sweeps.db"


def get_cache_dir() -> Path:
    """Resolve SWEEP_CACHE_DIR (creating it if needed)."""
    raw = os.getenv("SWEEP_CACHE_DIR", "data/cache")
    path = Path(raw)
    if not path.is_absolute():
        # Relative paths are taken from the working directory.
        path = Path.cwd() / path

    path.mkdir(parents=True, exist_ok=True)
    return path


def get_database_path() -> Path:
    return get_cache_dir() / CACHE_FILENAME


@asynccontextmanager
async def get_db() -> AsyncIterator[aiosqlite.Connection]:
    """Yield a cache connection with dict-like rows."""
    db_path = get_database_path()
    try:
        async with aiosqlite.connect(db_path) as db:
            db.row_factory = aiosqlite.Row
            yield db
    except sqlite3.OperationalError as e:
        if "unable to open database file" in str(e).lower():
            raise RuntimeError(
                "Unable to open the sweep cache database.\n\n"
                f"SWEEP_CACHE_DIR resolves to: {db_path.parent}\n\n"
                "Point SWEEP_CACHE_DIR at a writable directory or run sweeps with --no-cache."
            ) from e
        raise


@asynccontextmanager
async def transaction() -> AsyncIterator[aiosqlite.Connection]:
    """Transaction context manager (commit on success, rollback on error)."""
    async with get_db() as db:
        try:
            yield db
            await db.commit()
        except Exception:
            await db.rollback()
            raise
