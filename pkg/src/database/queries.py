"""Sweep cache queries."""

from __future__ import annotations

from typing import Any

from .connection import get_db, transaction
from .time import utc_now_timestamp


def _row_to_dict(row) -> dict[str, Any] | None:  # type: ignore[no-untyped-def]
    if row is None:
        return None
    return dict(row)


async def get_cached_sweep(cache_key: str) -> dict[str, Any] | None:
    """Return the stored sweep for cache_key (recording the hit), or None."""
    async with transaction() as db:
        cursor = await db.execute("SELECT * FROM sweep_results WHERE cache_key = ?", (cache_key,))
        row = _row_to_dict(await cursor.fetchone())
        if row is None:
            return None
        await db.execute(
            "UPDATE sweep_results SET hits = hits + 1, last_hit_at = ? WHERE cache_key = ?",
            (utc_now_timestamp(), cache_key),
        )
        return row


async def store_sweep(
    *,
    cache_key: str,
    name: str | None,
    n_points: int,
    csv_text: str,
    json_text: str,
    code_version: str,
) -> None:
    async with transaction() as db:
        await db.execute(
            """
            INSERT INTO sweep_results (cache_key, name, n_points, csv, json, code_version)
            VALUES (?, ?, ?, ?, ?, ?)
            ON CONFLICT(cache_key) DO UPDATE SET
                csv = excluded.csv,
                json = excluded.json,
                n_points = excluded.n_points,
                code_version = excluded.code_version,
                created_at = CURRENT_TIMESTAMP
            """,
            (cache_key, name, n_points, csv_text, json_text, code_version),
        )


async def get_cache_stats(cache_key: str) -> dict[str, Any] | None:
    """Hit bookkeeping for one entry (does not count as a hit)."""
    async with get_db() as db:
        cursor = await db.execute(
            "SELECT cache_key, name, n_points, hits, last_hit_at, created_at FROM sweep_results WHERE cache_key = ?",
            (cache_key,),
        )
        return _row_to_dict(await cursor.fetchone())


async def count_cached_sweeps() -> int:
    async with get_db() as db:
        cursor = await db.execute("SELECT COUNT(*) FROM sweep_results")
        row = await cursor.fetchone()
        return int(row[0]) if row else 0  # type: ignore[index]


async def clear_cache() -> int:
    """Delete every cached sweep; returns the number of rows removed."""
    async with transaction() as db:
        cursor = await db.execute("DELETE FROM sweep_results")
        return int(cursor.rowcount or 0)


async def list_cached_sweeps() -> list[dict[str, Any]]:
    """Bookkeeping for every entry, most recently created first."""
    async with get_db() as db:
        cursor = await db.execute(
            "SELECT cache_key, name, n_points, hits, last_hit_at, created_at, code_version "
            "FROM sweep_results ORDER BY created_at DESC, cache_key"
        )
        return [dict(row) for row in await cursor.fetchall()]
