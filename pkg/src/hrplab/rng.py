"""Seeded, portable random source for synthetic data generation.

Synthetic panels must be reproducible bit-for-bit from the seed alone,
independent of library versions or platform, so the generator is spelled
out here instead of delegating to ``numpy.random``:

* integer stream: SplitMix64 (Steele, Lea & Flood 2014; public domain),
  state and outputs are 64-bit unsigned;
* ``uniform(lo, hi)``: one 64-bit draw ``x``; ``u = (x >> 11) * 2**-53``
  in ``[0, 1)``; result ``lo + (hi - lo) * u``;
* ``normal(mean, std)``: Box-Muller cosine branch consuming exactly two
  64-bit draws ``x, y``; ``u1 = ((x >> 11) + 1) * 2**-53`` in ``(0, 1]``,
  ``u2 = (y >> 11) * 2**-53`` in ``[0, 1)``;
  ``z = sqrt(-2 ln u1) * cos(2 pi u2)``.
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO53 = float(1 << 53)


class SplitMix64:
    """Deterministic 64-bit generator; one instance per synthetic run."""

    def __init__(self, seed: int) -> None:
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must fit in 64 unsigned bits")
        self._state = seed

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) / _TWO53
        return lo + (hi - lo) * u

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        u1 = ((self.next_u64() >> 11) + 1) / _TWO53
        u2 = (self.next_u64() >> 11) / _TWO53
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
        return mean + std * z
