"""Deterministic pseudo-randomness built on SplitMix64.

Every stochastic step in the toolkit (word-level shuffles, synthetic
embedding vectors, test corpora) draws from SplitMix64, a 64-bit
generator with a published finalizer.  Streams are split by key
derivation rather than by jumping: the state of a stream is the first
8 bytes of ``SHA-256("part1|part2|...")``, so any (seed, text id,
replica index) tuple names one reproducible stream on every platform
and Python version.

SplitMix64 is counter-based: output ``k`` of a stream with state ``s``
is ``mix64(s + (k + 1) * GOLDEN_GAMMA)``.  That form is used to
vectorize bulk draws with numpy's wrapping uint64 arithmetic.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer (Steele, Lea & Flood variant)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_state(*parts) -> int:
    """Derive a 64-bit stream state from a tuple of key parts.

    Parts are stringified, joined with ``|``, hashed with SHA-256, and
    the first 8 bytes are read big-endian.
    """
    key = "|".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, state: int):
        self._state = state & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN_GAMMA) & MASK64
        return mix64(self._state)

    def next_below(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        r = self.next_u64()
        while r >= limit:
            r = self.next_u64()
        return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_below(i + 1)
            items[i], items[j] = items[j], items[i]


def uniform_block(state: int, count: int) -> np.ndarray:
    """``count`` uniforms in [0, 1) from the stream with ``state``.

    Matches the sequential stream: element ``k`` equals
    ``mix64(state + (k+1)*GOLDEN_GAMMA) >> 11`` scaled by 2**-53.
    Integer-only until the final exact scaling, hence bit-stable
    across platforms.
    """
    counters = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(state) + counters * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
