"""Deterministic 64-bit seed derivation for independent RNG streams.

Child seeds are produced by folding the master seed and any stream tags /
indices through splitmix64.  The mix is stable across platforms and Python
versions, so every trial, recursion level, and per-class run can be replayed
in isolation.
"""

from __future__ import annotations

import random

_MASK = (1 << 64) - 1

# Stream tags keep unrelated consumers of the same master seed independent.
STREAM_TRIAL = 0x01
STREAM_ALG1 = 0x02
STREAM_BALL = 0x03
STREAM_RECURSE = 0x04
STREAM_GENERATE = 0x05
STREAM_DECOMP = 0x06


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def mix(*parts: int) -> int:
    """Fold integers into a single 64-bit seed via iterated splitmix64."""
    acc = 0
    for p in parts:
        acc = _splitmix64((acc ^ (int(p) & _MASK)) & _MASK)
    return acc


def spawn(*parts: int) -> random.Random:
    """Return a fresh ``random.Random`` seeded from ``mix(*parts)``."""
    return random.Random(mix(*parts))
