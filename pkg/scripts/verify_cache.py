#!/usr/bin/env python3
"""Initialize the sweep cache and check a store/lookup round trip.

This is a smoke test you can run locally.
"""

from __future__ import annotations

import asyncio
import os
import sys
from pathlib import Path


def _add_src_to_path() -> None:
    repo_root = Path(__file__).resolve().parent.parent
    src = repo_root / "src"
    sys.path.insert(0, str(src))


async def _verify() -> None:
    from database import init_database
    from database import queries as cache
    from database.connection import get_database_path, get_db

    await init_database()

    async with get_db() as db:
        cursor = await db.execute("SELECT name FROM sqlite_master WHERE type='table'")
        present = {r[0] for r in await cursor.fetchall()}  # type: ignore[index]

    missing = {"schema_migrations", "sweep_results"} - present
    if missing:
        raise RuntimeError(f"Missing expected tables: {sorted(missing)}")

    key = "verify-cache-smoke-test"
    await cache.store_sweep(cache_key=key, name="smoke", n_points=0, csv_text="a\r\n", json_text="{}", code_version="smoke")
    row = await cache.get_cached_sweep(key)
    if row is None or row["csv"] != "a\r\n":
        raise RuntimeError("Cache round trip failed")
    async with get_db() as db:
        await db.execute("DELETE FROM sweep_results WHERE cache_key = ?", (key,))
        await db.commit()

    print("OK: sweep cache initialized and round trip verified.")
    print(f"SWEEP_CACHE_DIR={os.getenv('SWEEP_CACHE_DIR', 'data/cache')}")
    print(f"Resolved cache path: {get_database_path()}")


def main() -> None:
    _add_src_to_path()
    asyncio.run(_verify())


if __name__ == "__main__":
    main()
