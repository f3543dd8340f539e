"""Environment-driven runtime settings."""

from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

DEFAULT_WORKERS = 4


def get_worker_count() -> int:
    """Worker-pool size from SWEEP_WORKERS (default 4, at least 1)."""
    raw = os.getenv("SWEEP_WORKERS", str(DEFAULT_WORKERS))
    try:
        workers = int(raw)
    except ValueError:
        logger.warning("Invalid SWEEP_WORKERS=%r; using %d", raw, DEFAULT_WORKERS)
        return DEFAULT_WORKERS
    return max(1, workers)
