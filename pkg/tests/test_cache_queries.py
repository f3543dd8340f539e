from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from database import queries as cache
from database.time import to_sqlite_timestamp


async def _store(key: str, name: str = "demo") -> None:
    await cache.store_sweep(
        cache_key=key,
        name=name,
        n_points=2,
        csv_text="a\r\n1\r\n2\r\n",
        json_text='{"rows": []}\n',
        code_version="1.0.0",
    )


@pytest.mark.asyncio
async def test_store_and_fetch_counts_hits(initialized_cache) -> None:
    assert await cache.get_cached_sweep("missing") is None

    await _store("k1")
    first = await cache.get_cached_sweep("k1")
    assert first is not None
    assert first["csv"] == "a\r\n1\r\n2\r\n"
    assert first["n_points"] == 2

    await cache.get_cached_sweep("k1")
    stats = await cache.get_cache_stats("k1")
    assert stats is not None
    assert stats["hits"] == 2
    assert stats["last_hit_at"] is not None


@pytest.mark.asyncio
async def test_store_overwrites_existing_entry(initialized_cache) -> None:
    await _store("k1", name="old")
    await cache.store_sweep(
        cache_key="k1",
        name="old",
        n_points=3,
        csv_text="b\r\n",
        json_text="{}\n",
        code_version="1.0.1",
    )
    row = await cache.get_cached_sweep("k1")
    assert row is not None
    assert row["csv"] == "b\r\n"
    assert row["code_version"] == "1.0.1"
    assert await cache.count_cached_sweeps() == 1


@pytest.mark.asyncio
async def test_clear_cache(initialized_cache) -> None:
    await _store("k1")
    await _store("k2")
    assert await cache.count_cached_sweeps() == 2
    assert await cache.clear_cache() == 2
    assert await cache.count_cached_sweeps() == 0


@pytest.mark.asyncio
async def test_list_cached_sweeps_reports_hits(initialized_cache) -> None:
    await _store("k1", name="fig2a")
    await _store("k2", name="fig3b")
    await cache.get_cached_sweep("k2")

    entries = {entry["cache_key"]: entry for entry in await cache.list_cached_sweeps()}
    assert set(entries) == {"k1", "k2"}
    assert entries["k1"]["hits"] == 0
    assert entries["k2"]["hits"] == 1
    assert entries["k2"]["name"] == "fig3b"
    assert "csv" not in entries["k1"]


def test_sqlite_timestamps_are_utc() -> None:
    local = datetime(2026, 3, 1, 12, 30, 5, tzinfo=timezone(timedelta(hours=2)))
    assert to_sqlite_timestamp(local) == "2026-03-01 10:30:05"
    assert to_sqlite_timestamp(datetime(2026, 3, 1, 12, 0, 0)) == "2026-03-01 12:00:00"
