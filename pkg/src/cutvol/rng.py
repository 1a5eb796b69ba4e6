"""Counter-based pseudo-random numbers (SplitMix64).

Every consumer of randomness in this package draws from an explicitly seeded
SplitMix64 stream: output i of stream k is mix64(base_k + i*GOLDEN), a pure
function of (seed, k, i).  That makes runs reproducible bit-for-bit, lets
parallel workers own disjoint streams, and keeps the compiled and the pure
backends on the identical sequence.  The platform RNG is never used.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective 64-bit hash."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def stream_base(seed: int, index: int = 0) -> int:
    """Base of the `index`-th substream of `seed` (one per Monte Carlo run)."""
    return mix64(mix64(seed & MASK64) + GOLDEN * (index + 1))


def u64_to_unit(x: int) -> float:
    """Map a 64-bit word to (0, 1): ((x >> 11) + 0.5) * 2^-53, never 0 or 1."""
    return ((x >> 11) + 0.5) * (2.0 ** -53)


class SplitMix64:
    """A sequential view of one counter-based stream."""

    __slots__ = ("base", "counter")

    def __init__(self, seed: int, index: int = 0, counter: int = 0):
        self.base = stream_base(seed, index)
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.base + GOLDEN * self.counter)

    def uniform(self) -> float:
        return u64_to_unit(self.next_u64())

    def randrange(self, n: int) -> int:
        return self.next_u64() % n
