"""Deterministic 64-bit PRNG (SplitMix64) with indexed substreams.

SplitMix64 is a counter-advanced mixing generator: state advances by a fixed
odd constant and each output is a finalizer mix of the new state, so streams
are reproducible bit-for-bit on every platform from a 64-bit seed.  Substreams
derive an independent seed from (seed, index), which makes parallel fan-out
(e.g. one substream per bootstrap resample) independent of worker count.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential SplitMix64 stream seeded with a 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        return _mix(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) via the multiply-shift range map."""
        if n <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * n) >> 64

    def next_float(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


def substream(seed: int, index: int) -> SplitMix64:
    """Independent stream for (seed, index); distinct indexes do not collide."""
    derived = _mix((seed & _MASK) ^ _mix(index & _MASK))
    return SplitMix64(derived)
