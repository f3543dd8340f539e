"""`cache stats` and `cache clear`: bookkeeping of the sweep result cache."""

from __future__ import annotations

import argparse
import logging

from database import init_database
from database import queries as cache
from database.connection import get_database_path
from model.errors import ParameterError

from .common import EXIT_OK, command, emit_document

logger = logging.getLogger(__name__)


@command
async def cache_stats_command(args: argparse.Namespace) -> int:
    await init_database()
    if args.key:
        entry = await cache.get_cache_stats(args.key)
        if entry is None:
            raise ParameterError(f"no cached sweep with key {args.key!r}")
        emit_document(entry, args.out)
        return EXIT_OK

    entries = await cache.list_cached_sweeps()
    document = {
        "path": str(get_database_path()),
        "entries": await cache.count_cached_sweeps(),
        "total_hits": sum(int(e["hits"] or 0) for e in entries),
        "sweeps": entries,
    }
    emit_document(document, args.out)
    return EXIT_OK


@command
async def cache_clear_command(args: argparse.Namespace) -> int:
    await init_database()
    removed = await cache.clear_cache()
    logger.info("Removed %d cached sweep(s)", removed)
    emit_document({"removed": removed}, args.out)
    return EXIT_OK
