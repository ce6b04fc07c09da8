"""
Deterministic Parallel Reduction
Chunk work runs on a thread pool capped by get_thread_count(); results are
collected in chunk order and reduced with a fixed-shape pairwise tree.
"""

from concurrent.futures import ThreadPoolExecutor

from core.config import get_thread_count


def pairwise_sum(values):
    """
    Sum a sequence with a balanced binary tree in index order.

    The tree depends only on len(values), so the floating-point result is
    the same for every thread count.
    """
    items = list(values)
    if not items:
        raise ValueError("pairwise_sum needs at least one value")
    while len(items) > 1:
        paired = [items[k] + items[k + 1] for k in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def map_chunks(fn, chunks, threads=None):
    """
    Apply fn to every chunk, returning results in chunk order.

    Args:
        fn: callable taking one chunk
        chunks: list of chunks
        threads: worker cap (default: get_thread_count())

    Returns:
        list: fn(chunk) for each chunk, in input order
    """
    chunks = list(chunks)
    workers = min(threads or get_thread_count(), max(1, len(chunks)))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def chunked_sum(fn, chunks, threads=None):
    """pairwise_sum of map_chunks(fn, chunks)."""
    return pairwise_sum(map_chunks(fn, chunks, threads))
