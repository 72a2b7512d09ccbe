"""Walk-sampling kernels.

The numba kernel and the pure-Python fallback implement the identical walk
law and consume the identical splitmix64 stream (see ``rng.py``), so their
integer visit counts match exactly for any (network, seed, source). Tests
pin this parity; the fallback also doubles as the readable definition.

Walk law, per walk: start at ``source``; on arrival at a node after h
steps, stop if the node has degree one (extremity), else stop if h equals
the step budget, else stop if every neighbor was already visited
(trapped); otherwise move to a uniformly random unvisited neighbor.
Arrivals at steps 1..h are counted; the source position (step 0) is not.
"""
from __future__ import annotations

import math

import numpy as np

from .rng import GOLDEN, MASK64, WalkRng

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap

_U_GOLDEN = np.uint64(GOLDEN)


@njit(cache=True, nogil=True)
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True, nogil=True)
def _run_walks(indptr, indices, degrees, source, max_steps, walks, master, counts):
    n = degrees.shape[0]
    maxdeg = 1
    for i in range(n):
        if degrees[i] > maxdeg:
            maxdeg = degrees[i]
    buf = np.empty(maxdeg, dtype=np.int64)
    stamp = np.full(n, -1, dtype=np.int64)

    state = np.uint64(master) ^ _mix64((np.uint64(source) + np.uint64(1)) * _U_GOLDEN)
    state = _mix64(state)

    for m in range(walks):
        v = source
        stamp[v] = m
        h = 0
        while True:
            if h >= 1 and degrees[v] == 1:
                break
            if h == max_steps:
                break
            k = 0
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if stamp[w] != m:
                    buf[k] = w
                    k += 1
            if k == 0:
                break
            mask = np.uint64(0)
            mm = np.uint64(k - 1)
            while mm != np.uint64(0):
                mask = (mask << np.uint64(1)) | np.uint64(1)
                mm = mm >> np.uint64(1)
            while True:
                state = state + _U_GOLDEN
                r = _mix64(state) & mask
                if r < np.uint64(k):
                    break
            v = buf[np.int64(r)]
            h += 1
            stamp[v] = m
            counts[h - 1, v] += 1


@njit(cache=True, nogil=True)
def _reduce_counts(counts, walks, entropy_out, survival_out):
    # Entropy accumulates left-to-right in ascending target order; this is
    # the canonical summation order used everywhere probabilities meet logs.
    steps, n = counts.shape
    for h in range(steps):
        total = np.int64(0)
        acc = 0.0
        for j in range(n):
            c = counts[h, j]
            if c > 0:
                total += c
                p = c / walks
                acc += p * math.log(p)
        e = -acc
        entropy_out[h] = e if e > 0.0 else 0.0
        survival_out[h] = total / walks


def _run_walks_py(indptr, indices, degrees, source, max_steps, walks, master, counts):
    """Fallback with the same draw sequence as the compiled kernel."""
    rng = WalkRng(int(master), int(source))
    n = len(degrees)
    stamp = [-1] * n
    for m in range(walks):
        v = int(source)
        stamp[v] = m
        h = 0
        while True:
            if h >= 1 and degrees[v] == 1:
                break
            if h == max_steps:
                break
            buf = [int(w) for w in indices[indptr[v]:indptr[v + 1]] if stamp[w] != m]
            if not buf:
                break
            v = buf[rng.next_below(len(buf))]
            h += 1
            stamp[v] = m
            counts[h - 1, v] += 1


def _reduce_counts_py(counts, walks, entropy_out, survival_out):
    steps, n = counts.shape
    for h in range(steps):
        total = 0
        acc = 0.0
        for j in range(n):
            c = int(counts[h, j])
            if c > 0:
                total += c
                p = c / walks
                acc += p * math.log(p)
        e = -acc
        entropy_out[h] = e if e > 0.0 else 0.0
        survival_out[h] = total / walks


def walk_counts_for_source(
    indptr: np.ndarray,
    indices: np.ndarray,
    degrees: np.ndarray,
    source: int,
    max_steps: int,
    walks: int,
    master_seed: int,
) -> np.ndarray:
    """Dense per-step visit counts, shape (max_steps, N), int32."""
    counts = np.zeros((max_steps, len(degrees)), dtype=np.int32)
    runner = _run_walks if HAVE_NUMBA else _run_walks_py
    runner(
        indptr,
        indices,
        degrees,
        np.int64(source),
        np.int64(max_steps),
        np.int64(walks),
        np.uint64(master_seed & MASK64),
        counts,
    )
    return counts


def reduce_counts(counts: np.ndarray, walks: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-step (diversity entropy, survival mass) from dense counts."""
    max_steps = counts.shape[0]
    entropy = np.zeros(max_steps, dtype=np.float64)
    survival = np.zeros(max_steps, dtype=np.float64)
    reducer = _reduce_counts if HAVE_NUMBA else _reduce_counts_py
    reducer(counts, np.int64(walks) if HAVE_NUMBA else int(walks), entropy, survival)
    return entropy, survival


def walk_stats_for_source(
    indptr: np.ndarray,
    indices: np.ndarray,
    degrees: np.ndarray,
    source: int,
    max_steps: int,
    walks: int,
    master_seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-step (diversity entropy, survival mass) for one source.

    Equivalent to reducing ``walk_counts_for_source`` but keeps the dense
    counts inside the call, which is what lets city-scale runs stay sparse.
    """
    counts = walk_counts_for_source(
        indptr, indices, degrees, source, max_steps, walks, master_seed
    )
    return reduce_counts(counts, walks)


def warmup() -> None:
    """Trigger JIT compilation on a toy graph (no-op without numba)."""
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int64)
    degrees = np.array([1, 1], dtype=np.int64)
    walk_stats_for_source(indptr, indices, degrees, 0, 2, 2, 1)
