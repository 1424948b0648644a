"""Deterministic 64-bit PRNG for reproducible sampling.

Split construction must be byte-identical across platforms and library
versions, so sampling is built on a fixed, documented generator
(splitmix64) rather than on ``random`` or numpy, whose shuffle/choice
streams are not guaranteed stable over releases.

Algorithm: splitmix64 (Steele, Lea, Flood, "Fast Splittable Pseudorandom
Number Generators"), the public-domain reference constants. Bounded draws
use rejection sampling, shuffles are Fisher-Yates; both are fixed here and
covered by regression vectors in the tests.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


class DeterministicRng:
    """splitmix64 stream with unbiased bounded draws and Fisher-Yates shuffle."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        """Next raw 64-bit output."""
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("randbelow() requires n >= 1")
        # Reject draws from the incomplete final block of [0, 2**64).
        limit = _MASK64 - (_MASK64 + 1) % n
        while True:
            r = self.next_u64()
            if r <= limit:
                return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle (descending index convention)."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: Sequence[T], k: int) -> list[T]:
        """k distinct elements drawn without replacement, in draw order."""
        n = len(items)
        if not 0 <= k <= n:
            raise ValueError(f"sample() size {k} out of range for population {n}")
        # Partial Fisher-Yates over an index table; only k swaps needed.
        idx = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return [items[idx[i]] for i in range(k)]
