"""Seeded family of hash functions mapping key ids to workers.

The mixing function is the SplitMix64 finalizer (Steele, Lea & Flood 2014).
A key is hashed as ``mix64(mix64(key) + seed)`` so that every seed gives an
independent-looking function. The scalar path uses Python ints, the
vectorized path uses wrapping ``uint64`` arithmetic; both agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import UsageError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# Salt for the source-split hash, kept apart from the worker-choice seeds.
_SPLIT_SALT = 0x5EED5011C0FFEE01


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z).astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def hash_key(seed: int, key: int) -> int:
    return mix64((mix64(key & MASK64) + seed) & MASK64)


def hash_keys(seed: int, keys: np.ndarray) -> np.ndarray:
    # int64 keys reinterpret as their two's complement uint64, same as `key & MASK64`
    k = np.asarray(keys, dtype=np.int64).view(np.uint64)
    h = mix64_array(k)
    h += np.uint64(seed & MASK64)
    return mix64_array(h)


def derive_seeds(master_seed: int, d: int) -> list[int]:
    """Derive ``d`` pairwise-distinct 64-bit seeds from ``master_seed``.

    Seeds are drawn from the SplitMix64 stream started at ``master_seed``:
    the i-th candidate is ``mix64(master_seed + (i + 1) * GOLDEN_GAMMA)``. A
    candidate equal to an earlier seed is discarded and the counter advances.
    """
    if d < 1:
        raise UsageError(f"d must be >= 1, got {d}")
    seeds: list[int] = []
    counter = 0
    while len(seeds) < d:
        counter += 1
        s = mix64((master_seed + counter * GOLDEN_GAMMA) & MASK64)
        if s not in seeds:
            seeds.append(s)
    return seeds


def split_seed(master_seed: int) -> int:
    """Seed for hashing source-routing keys onto sources."""
    return derive_seeds(master_seed ^ _SPLIT_SALT, 1)[0]


@dataclass(frozen=True)
class HashFamily:
    """``d`` seeded hash functions ``h_1..h_d`` into ``[0, workers)``."""

    workers: int
    d: int = 2
    master_seed: int = 0
    seeds: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise UsageError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "seeds", tuple(derive_seeds(self.master_seed, self.d)))

    def choices(self, key: int) -> list[int]:
        """Candidate workers ``[h_1(key), ..., h_d(key)]``; entries may coincide."""
        return [hash_key(s, key) % self.workers for s in self.seeds]

    def choices_array(self, keys: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`choices`; returns an ``(len(keys), d)`` int64 array."""
        keys = np.asarray(keys, dtype=np.int64)
        out = np.empty((keys.shape[0], self.d), dtype=np.int64)
        w = np.uint64(self.workers)
        for i, s in enumerate(self.seeds):
            out[:, i] = (hash_keys(s, keys) % w).astype(np.int64)
        return out
