"""Portable seeded random number generation.

Supply streams must be reproducible from a recorded 64-bit seed by any
implementation, so the generator is specified exactly here rather than
delegated to a platform RNG: SplitMix64 (Steele, Lea & Flood's mixing
constants) with rejection-sampled bounded draws to avoid modulo bias.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit SplitMix generator with an explicitly specified sequence.

    The state advances by a fixed odd increment; each output is the mixed
    state. `randint` draws by rejection so every value in [low, high] is
    exactly equally likely.
    """

    def __init__(self, seed: int) -> None:
        self._state = seed & MASK64

    @property
    def state(self) -> int:
        return self._state

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in the inclusive range [low, high]."""
        if low > high:
            raise ValueError(f"empty range [{low}, {high}]")
        span = high - low + 1
        # Largest multiple of span representable in 64 bits; values at or
        # above it are re-drawn so the final modulo is unbiased.
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            value = self.next_uint64()
            if value < limit:
                return low + (value % span)
