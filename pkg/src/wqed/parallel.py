import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads=None) -> int:
    """Explicit value, else ``WQED_THREADS``, else 1."""
    if threads is None:
        threads = os.environ.get("WQED_THREADS", 1)
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def parallel_map(fn, items, threads=1):
    """``list(map(fn, items))``, optionally on a thread pool; order is preserved."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
