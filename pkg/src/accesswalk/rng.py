"""Deterministic random streams for walk sampling.

Each walk source gets its own stream derived from (master_seed, source id)
by a fixed splitting function, so results never depend on worker count or
scheduling order. The generator is splitmix64: a single 64-bit counter
advanced by a fixed odd increment, with the output passed through a strong
mixing function. The numba kernel in ``_kernel.py`` implements the exact
same arithmetic; ``tests/test_rng.py`` pins the parity.
"""
from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """splitmix64 output mixing (Steele, Lea & Flood)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_state(master_seed: int, source: int) -> int:
    """Initial counter for the (master_seed, source) stream."""
    z = (master_seed & MASK64) ^ mix64(((source + 1) * GOLDEN) & MASK64)
    return mix64(z)


class WalkRng:
    """Reference stream implementation (pure Python).

    The fast kernel consumes draws in the same order, so paths sampled here
    are bit-identical to the kernel's for the same (master_seed, source).
    """

    __slots__ = ("_state",)

    def __init__(self, master_seed: int, source: int):
        self._state = stream_state(master_seed, source)

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def next_below(self, n: int) -> int:
        """Exactly uniform integer in [0, n) via bitmask rejection.

        Always consumes at least one draw, even for n == 1, so draw counts
        stay aligned with the kernel.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        mask = 0
        m = n - 1
        while m:
            mask = (mask << 1) | 1
            m >>= 1
        while True:
            r = self.next_u64() & mask
            if r < n:
                return r
