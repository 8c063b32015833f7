"""Seedable, splittable randomness for chain trajectories."""

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

ALGORITHM = "numpy.random.PCG64"

_BLOCK = 8192


class ChainRandom:
    """
    Independent PCG64 streams for one trajectory.

    The root SeedSequence is split into three children: proposals, lazy
    coins and the label reservoir, so enabling laziness or the reservoir
    never shifts the proposal sequence. Draws are taken in blocks and
    handed out one at a time.
    """

    algorithm = ALGORITHM

    def __init__(self, seed: int | SeedSequence):
        self._seed_sequence = seed if isinstance(seed, SeedSequence) else SeedSequence(seed)
        proposals, coins, reservoir = self._seed_sequence.spawn(3)
        self._proposals = Generator(PCG64(proposals))
        self._coins = Generator(PCG64(coins))
        self.reservoir = Generator(PCG64(reservoir))

        self._pair_buffer: list[int] = []
        self._universe: tuple[int, int] | None = None
        self._coin_buffer: list[int] = []

    def pair(self, num_wards: int, num_districts: int) -> tuple[int, int]:
        """Uniform (ward, district) from the fixed universe W x D."""
        universe = (num_wards, num_districts)
        if universe != self._universe:
            self._universe = universe
            self._pair_buffer = []
        if not self._pair_buffer:
            block = self._proposals.integers(0, num_wards * num_districts, size=_BLOCK, dtype=np.int64)
            self._pair_buffer = block[::-1].tolist()
        code = self._pair_buffer.pop()
        return code // num_districts, code % num_districts

    def coin(self) -> bool:
        """Fair coin; True means hold (lazy skip)."""
        if not self._coin_buffer:
            self._coin_buffer = self._coins.integers(0, 2, size=_BLOCK, dtype=np.int8)[::-1].tolist()
        return self._coin_buffer.pop() == 1

    def spawn(self, n: int) -> list["ChainRandom"]:
        """n statistically independent ChainRandom instances."""
        return [ChainRandom(child) for child in self._seed_sequence.spawn(n)]
