"""Seedable, portable random generator and the sampling measure for checks.

The generator is SplitMix64: a 64-bit counter-based scheme defined purely by
integer arithmetic, so reports are reproducible bit-for-bit across platforms
and independent of any library RNG.
"""

from __future__ import annotations

from .seqspace import NormKind, SUP_NORM, SparseVec, norm

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for b in text.encode("utf-8"):
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


class SplitMix64:
    """SplitMix64 stream: state advances by a fixed odd gamma, output is mixed."""

    __slots__ = ("_seed0", "_state")

    def __init__(self, seed: int):
        self._seed0 = seed & _MASK
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix64(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        span = hi - lo + 1
        return lo + self.next_u64() % span

    def spawn(self, tag: str) -> "SplitMix64":
        """Independent stream derived from the root seed and a name.

        Derivation uses the original seed, not the current state, so spawned
        streams do not depend on call order.
        """
        return SplitMix64(_mix64(self._seed0 ^ fnv1a64(tag)))


def random_sparse(
    rng: SplitMix64,
    amp: float,
    max_support: int = 6,
    index_range: int = 40,
) -> SparseVec:
    """Random finitely supported vector: support size <= max_support within
    [1, index_range], entries uniform in [-amp, amp]."""
    size = rng.randint(1, max_support)
    chosen: dict[int, float] = {}
    while len(chosen) < size:
        i = rng.randint(1, index_range)
        if i not in chosen:
            chosen[i] = rng.uniform(-amp, amp)
    return SparseVec(chosen)


def random_direction(
    rng: SplitMix64,
    norm_kind: NormKind = SUP_NORM,
    max_support: int = 6,
    index_range: int = 40,
) -> SparseVec:
    """Random unit vector under the given norm."""
    while True:
        d = random_sparse(rng, 1.0, max_support, index_range)
        n = norm(d, norm_kind)
        if n > 1e-9:
            return d.scale(1.0 / n)
