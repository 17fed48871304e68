"""Thread-count policy and an order-preserving parallel map.

DISCREPANCY_LAB_THREADS caps worker threads library-wide (default 1, i.e.
fully sequential).  Results are returned in input order, and every reduction
in the library is integer-exact, so parallel runs are bit-identical to
sequential ones.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "DISCREPANCY_LAB_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def tmap(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """map(fn, items) in input order, threaded when the env cap allows."""
    workers = min(thread_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
