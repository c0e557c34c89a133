"""Seeded, versioned random streams for the chain steppers.

Draws come from numpy's PCG64 bit generator, buffered as raw 64-bit words so
that a single bounded integer costs a list pop rather than a numpy call.
Bounded integers use rejection on the top of the 64-bit range, so they are
exactly uniform.
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "pcg64-raw64-reject/1"
_BLOCK = 4096
_TWO64 = 1 << 64


class RngStream:
    """Deterministic integer stream. Same seed, same draws, on any platform."""

    algorithm = ALGORITHM

    def __init__(self, seed: int | np.random.SeedSequence):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
            self.seed = seed.entropy
        else:
            self.seed = int(seed)
            self._seq = np.random.SeedSequence(self.seed)
        self._bitgen = np.random.PCG64(self._seq)
        self._buf: list[int] = []

    def _refill(self) -> None:
        words = self._bitgen.random_raw(_BLOCK).tolist()
        words.reverse()
        self._buf = words

    def next_u64(self) -> int:
        if not self._buf:
            self._refill()
        return self._buf.pop()

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)``."""
        if k <= 0:
            raise ValueError(f"below() needs a positive bound, got {k}")
        limit = _TWO64 - _TWO64 % k
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def distinct_pair(self, k: int) -> tuple[int, int]:
        """Two distinct values of ``range(k)``, uniform over unordered pairs."""
        a = self.below(k)
        b = self.below(k - 1)
        if b >= a:
            b += 1
        return a, b

    def sample(self, population, size: int) -> list:
        """Uniform ``size``-subset of ``population`` (partial Fisher-Yates)."""
        pool = list(population)
        for t in range(size):
            u = t + self.below(len(pool) - t)
            pool[t], pool[u] = pool[u], pool[t]
        return pool[:size]

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def spawn(self, n: int) -> list["RngStream"]:
        """Independent child streams for parallel chains."""
        return [RngStream(s) for s in self._seq.spawn(n)]

    def numpy(self) -> np.random.Generator:
        """A numpy Generator on an independent child stream."""
        return np.random.Generator(np.random.PCG64(self._seq.spawn(1)[0]))
