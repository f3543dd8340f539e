from __future__ import annotations

import aiosqlite
import pytest


@pytest.mark.asyncio
async def test_init_database_migrates_legacy_sweep_table_without_data_loss(cache_env) -> None:
    """Simulate a cache created before hit tracking and ensure init_database upgrades it."""
    cache_env.mkdir(parents=True, exist_ok=True)
    db_path = cache_env / "sweeps.db"
    async with aiosqlite.connect(db_path) as conn:
        await conn.executescript(
            """
            CREATE TABLE IF NOT EXISTS sweep_results (
                cache_key TEXT PRIMARY KEY,
                name TEXT,
                n_points INTEGER NOT NULL,
                csv TEXT NOT NULL,
                json TEXT NOT NULL,
                code_version TEXT NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            );
            """
        )
        await conn.execute(
            "INSERT INTO sweep_results (cache_key, name, n_points, csv, json, code_version) VALUES (?, ?, ?, ?, ?, ?)",
            ("abc", "fig2c", 1, "temperature\r\n", "{}", "0.9.0"),
        )
        await conn.commit()

    from database import init_database

    await init_database()
    # Second run is a no-op.
    await init_database()

    async with aiosqlite.connect(db_path) as conn:
        conn.row_factory = aiosqlite.Row
        cur = await conn.execute("PRAGMA table_info(sweep_results)")
        cols = [r[1] for r in await cur.fetchall()]
        assert "hits" in cols
        assert "last_hit_at" in cols

        cur2 = await conn.execute("SELECT cache_key, name, hits, last_hit_at FROM sweep_results WHERE cache_key = 'abc'")
        row = await cur2.fetchone()
        assert row is not None
        assert row["name"] == "fig2c"
        assert int(row["hits"]) == 0
        assert row["last_hit_at"] is None

        cur3 = await conn.execute("SELECT COUNT(*) FROM schema_migrations")
        assert (await cur3.fetchone())[0] == 1
