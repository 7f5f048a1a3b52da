"""A tiny parallel-map capability handed to modules by the CLI.

Results are reassembled in input order, so reductions are deterministic for
any worker count; worker count 1 runs inline.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

__all__ = ["pmap"]


def pmap(fn, items, workers: int = 1):
    items = list(items)
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
