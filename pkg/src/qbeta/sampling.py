"""Portable deterministic pseudo-random sampling.

The harness promises byte-identical reports for a fixed seed across
platforms, so it cannot rely on library RNGs whose streams may change.
SplitMix64 is small, fast and fully specified: state advances by the golden
constant and the output mix is the standard 30/27/31 xor-shift multiply.

Per-(identity, point-index) substreams derive their seed by mixing the run
seed with an FNV-1a hash of the identity id and the index, so report records
do not depend on evaluation order.
"""

from __future__ import annotations

import math

__all__ = ["SplitMix64", "substream", "fnv1a64"]

_MASK = (1 << 64) - 1


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & _MASK
    return h


class SplitMix64:
    """SplitMix64 generator; uniform doubles use the top 53 bits."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (2.0 ** -53)
        return lo + (hi - lo) * u

    def modulus(self, lo: float, hi: float) -> float:
        return self.uniform(lo, hi)

    def phase(self) -> float:
        return self.uniform(0.0, 2.0 * math.pi)

    def complex_in_annulus(self, lo: float, hi: float, real: bool) -> complex:
        """Positive real draw (real profile) or full-phase complex draw."""
        m = self.modulus(lo, hi)
        if real:
            return complex(m, 0.0)
        ph = self.phase()
        return complex(m * math.cos(ph), m * math.sin(ph))


def substream(seed: int, identity_id: str, index: int) -> SplitMix64:
    """Independent, order-insensitive stream for one (identity, point) pair."""
    mixed = (seed & _MASK) ^ fnv1a64(identity_id) ^ (0x9E3779B97F4A7C15 * (index + 1) & _MASK)
    return SplitMix64(mixed)
