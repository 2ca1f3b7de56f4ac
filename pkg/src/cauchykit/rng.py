"""SplitMix64, the single source of randomness for Monte-Carlo rows.

The output stream is fixed by the algorithm (Steele, Lea & Flood 2014), so
any reimplementation seeded the same way yields the same integers.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SplitMix64", "GOLDEN_GAMMA"]

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)

    def next_u64_array(self, count: int) -> np.ndarray:
        """The next ``count`` outputs at once; equal to repeated :meth:`next_u64`."""
        k = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + k * np.uint64(GOLDEN_GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GOLDEN_GAMMA) & MASK64
        return z

    def uniform(self, count: int) -> np.ndarray:
        """Doubles in [0, 1) from the top 53 bits of each output."""
        return (self.next_u64_array(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
