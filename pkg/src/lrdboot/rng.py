"""Keyed random streams.

Every random draw in the package comes from a Philox generator whose key is
a hash of ``(seed, *keys)``. Streams are therefore addressable: replicate 17
of series 3 can be regenerated without touching replicates 0..16, and the
order in which workers consume streams never changes the numbers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def _entropy(seed: int, keys: tuple[int, ...]) -> list[int]:
    words = [int(seed) & _MASK64]
    for k in keys:
        k = int(k)
        if k < 0:
            raise ValueError("stream keys must be non-negative integers")
        words.append(k & _MASK64)
    return words


def derive_seed(seed: int, *keys: int) -> int:
    """Hash ``(seed, *keys)`` into a new 64-bit unsigned seed."""
    ss = np.random.SeedSequence(_entropy(seed, keys))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return an independent counter-based generator for ``(seed, *keys)``."""
    ss = np.random.SeedSequence(_entropy(seed, keys))
    key = ss.generate_state(2, dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
