"""Bounded parallel map for per-point and per-pair work.

All library operations are pure functions of immutable inputs, so mapping
them across a thread pool is safe; PROFILEKIT_THREADS caps the pool (1
disables threading entirely). Results always come back in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

ENV_VAR = "PROFILEKIT_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    available = os.cpu_count() or 1
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return available
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError(f"{ENV_VAR} must be at least 1, got {cap}")
    return min(cap, available)


def pmap(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    work = list(items)
    workers = worker_count()
    if workers == 1 or len(work) <= 1:
        return [fn(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
