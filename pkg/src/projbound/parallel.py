"""Process-pool helpers for the exhaustive searches.

Work is always cut into the same fixed chunks regardless of the worker count,
and reductions are order-independent, so results do not depend on scheduling.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

WORKERS_ENV = "PROJBOUND_WORKERS"


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def pmap(fn, tasks, workers: int | None = None) -> list:
    tasks = list(tasks)
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def chunk_ranges(total: int, size: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def reduce_argmax(parts, tie: float, prefer):
    """Combine per-chunk ``(best_value, [(key, value), ...])`` results.

    Every chunk reports all of its keys whose value is within ``tie`` of the
    chunk maximum; the global winner is ``prefer(keys)`` over the keys within
    ``tie`` of the global maximum.
    """
    best = max(p[0] for p in parts)
    keys = [(k, v) for p in parts for k, v in p[1] if v >= best - tie]
    key = prefer([k for k, _ in keys])
    value = next(v for k, v in keys if k == key)
    return best, key, value
