"""Seeded, replayable random-number streams for replica simulations.

Every stochastic operation in the package takes an :class:`RngSpec`.  A spec
names one PCG64 stream through the pair ``(master_seed, replica_index)``;
batch operations give replica ``i`` the stream ``(master_seed, base + i)``.
Streams with different pairs are statistically independent (numpy
``SeedSequence`` entropy mixing), so replicas can run in any order, on any
number of workers, and still reproduce bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSpec:
    """Address of one reproducible random stream."""

    master_seed: int
    replica_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= _MASK64:
            raise ValueError("master_seed must fit in 64 unsigned bits")
        if self.replica_index < 0:
            raise ValueError("replica_index must be nonnegative")

    def bit_generator(self) -> PCG64:
        return bit_generator_for(self.master_seed, self.replica_index)

    def generator(self) -> Generator:
        return Generator(self.bit_generator())

    def child(self, offset: int) -> "RngSpec":
        """Stream for replica ``replica_index + offset`` of the same batch."""
        return RngSpec(self.master_seed, self.replica_index + offset)


def bit_generator_for(master_seed: int, replica_index: int) -> PCG64:
    return PCG64(SeedSequence((master_seed & _MASK64, replica_index)))


def derive_seed(master_seed: int, label: str) -> int:
    """Deterministic 64-bit sub-seed for a named experiment stage.

    Keeps disorder draws, dynamics replicas, and auxiliary draws on disjoint
    stream families even when they share one configured master seed.
    """
    digest = np.uint64(sum((i + 1) * b for i, b in enumerate(label.encode())))
    ss = SeedSequence((master_seed & _MASK64, int(digest), len(label)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
