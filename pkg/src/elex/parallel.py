"""Deterministic fan-out over a worker pool.

Results are reassembled in input order, so output bytes never depend on
the thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "ELEX_THREADS"


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get(ENV_THREADS, "1"))
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def ordered_map(fn, items, threads: int = 1) -> list:
    """Like ``list(map(fn, items))`` but fanned out over ``threads``."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
