"""Optional thread fan-out, capped by ``PLANKBOUND_THREADS`` (0 = auto)."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("PLANKBOUND_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"PLANKBOUND_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("PLANKBOUND_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def parallel_map(f, items):
    """``[f(x) for x in items]``, possibly on a thread pool; order is preserved."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [f(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(f, items))
