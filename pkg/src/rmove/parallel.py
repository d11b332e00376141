"""Worker-count policy and an order-preserving parallel map.

RMOVE_THREADS caps the worker count; 0 forces the deterministic
single-threaded path.  Work items must be pure: results are reassembled
in input order, so scheduling never changes output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(deterministic: bool = False) -> int:
    if deterministic:
        return 1
    env = os.environ.get("RMOVE_THREADS")
    if env is None:
        return os.cpu_count() or 1
    try:
        requested = int(env)
    except ValueError:
        return 1
    return 1 if requested <= 0 else requested


def parallel_map(fn, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
