"""
rng.py - Reproducible splittable random streams

RngStream names a Philox (counter-based) generator by (seed, stream_id, path).
Distinct stream ids give independent streams from one seed, so replica i of an
experiment draws from RngStream(seed, i) no matter how many workers run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.path))
        return np.random.Generator(np.random.Philox(seq))

    def substream(self, index: int) -> RngStream:
        return RngStream(self.seed, self.stream_id, (*self.path, index))


def as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return rng.generator()


class UniformBuffer:
    """Block-buffered uniform [0,1) draws for tight Python walk loops."""

    def __init__(self, gen: np.random.Generator, block: int = 8192):
        self._gen = gen
        self._block = block
        self._buf: list[float] = []
        self._pos = 0

    def next(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = self._gen.random(self._block).tolist()
            self._pos = 0
        value = self._buf[self._pos]
        self._pos += 1
        return value

    def choice(self, n: int) -> int:
        """Uniform index in range(n)."""
        k = int(self.next() * n)
        return k if k < n else n - 1
