"""Deterministic chunked execution.

Work is always split into the same fixed-size chunks whatever the thread
count, and results come back in chunk order. Per-item outputs therefore never
depend on scheduling, which is what makes ``threads=1`` and ``threads=N``
produce identical bytes.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_default_threads: int | None = None


def set_default_threads(n: int | None) -> None:
    """Set the process-wide thread cap; ``None`` means all cores."""
    global _default_threads
    _default_threads = n


def resolve_threads(threads: int | None = None) -> int:
    n = threads if threads is not None else _default_threads
    if n is None:
        n = os.cpu_count() or 1
    return max(1, int(n))


def ordered_map(fn: Callable[[T], R], items: Sequence[T] | Iterable[T], threads: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, possibly on a thread pool, in input order."""
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))


def chunk_bounds(size: int, chunk: int) -> list[tuple[int, int]]:
    return [(i, min(i + chunk, size)) for i in range(0, size, chunk)]
