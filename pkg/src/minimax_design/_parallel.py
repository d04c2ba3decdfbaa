"""Worker-pool plumbing and deterministic chunked nearest-neighbour passes.

Candidate sets are large (10^4..10^6 rows), so distance computations run over
fixed-size row chunks.  Chunks may be dispatched to a thread pool, but the
chunk boundaries and the order in which partial results are stitched back
together never depend on the worker count, so every reduction is bitwise
reproducible for any number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

CHUNK = 8192

_workers = None


def get_workers() -> int:
    """Current worker count (env MINIMAX_WORKERS, else machine parallelism)."""
    global _workers
    if _workers is None:
        env = os.environ.get("MINIMAX_WORKERS")
        if env is not None:
            _workers = max(1, int(env))
        else:
            _workers = os.cpu_count() or 1
    return _workers


def set_workers(n: int) -> None:
    global _workers
    _workers = max(1, int(n))


def _chunk_ranges(n: int):
    return [(lo, min(lo + CHUNK, n)) for lo in range(0, n, CHUNK)]


def _map_chunks(fn, n: int):
    """Apply fn(lo, hi) over fixed chunks of range(n), in order."""
    ranges = _chunk_ranges(n)
    w = get_workers()
    if w <= 1 or len(ranges) <= 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=w) as pool:
        return list(pool.map(lambda r: fn(*r), ranges))


def nearest_assignment(points: np.ndarray, centers: np.ndarray):
    """Index of and distance to the nearest center for every point row.

    Ties break to the lowest center index.  Returns (owner, dist) as
    int64 / float64 arrays of length len(points).
    """
    points = np.asarray(points, dtype=float)
    centers = np.asarray(centers, dtype=float)
    npts = points.shape[0]
    owner = np.empty(npts, dtype=np.int64)
    dist = np.empty(npts, dtype=np.float64)
    c_sq = np.einsum("ij,ij->i", centers, centers)

    def work(lo, hi):
        block = points[lo:hi]
        # squared distances via the expanded product; clip tiny negatives
        d2 = np.einsum("ij,ij->i", block, block)[:, None] - 2.0 * (block @ centers.T) + c_sq[None, :]
        np.maximum(d2, 0.0, out=d2)
        idx = np.argmin(d2, axis=1)
        owner[lo:hi] = idx
        # recompute the winning distance directly for accuracy
        diff = block - centers[idx]
        dist[lo:hi] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        return None

    _map_chunks(work, npts)
    return owner, dist


def nearest_distance(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Distance from every point row to its nearest center."""
    return nearest_assignment(points, centers)[1]


def ipow(a: np.ndarray, k: int) -> np.ndarray:
    """a**k for integer k >= 0 by repeated squaring (fast for array bases)."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = None
    base = np.asarray(a, dtype=float)
    while k:
        if k & 1:
            result = base.copy() if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return np.ones_like(base) if result is None else result


def dist_pow(d2: np.ndarray, s: float) -> np.ndarray:
    """Elementwise ||.||^s from squared distances, cheap for even integer s."""
    if s == 0:
        return np.ones_like(d2)
    half = 0.5 * s
    if float(half).is_integer():
        return ipow(d2, int(half))
    return np.power(d2, half)
