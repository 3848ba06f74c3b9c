"""Seeded random streams for the simulator.

Replication ``k`` of a run seeded with ``seed`` always draws from
``SeedSequence(seed, spawn_key=(k,))``, so a replication's output depends only
on (seed, k) and never on how many replications run side by side.
"""

import math

import numpy as np

_BLOCK = 8192


def replication_seed(seed: int, k: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(k,))


class RngStream:
    """Uniform variates on (0, 1], pulled from PCG64 in blocks."""

    def __init__(self, seed_seq):
        if not isinstance(seed_seq, np.random.SeedSequence):
            seed_seq = np.random.SeedSequence(seed_seq)
        self._gen = np.random.Generator(np.random.PCG64(seed_seq))
        self._buf = []
        self._pos = 0

    def _refill(self):
        # random() is on [0, 1); flip it so 0 never reaches log()
        self._buf = (1.0 - self._gen.random(_BLOCK)).tolist()
        self._pos = 0

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._refill()
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def block(self) -> list:
        """Hand out the rest of the current block (refilling if empty) for hot loops."""
        if self._pos == len(self._buf):
            self._refill()
        out = self._buf[self._pos:]
        self._pos = len(self._buf)
        return out


def exponential_from_uniform(u: float, rate: float) -> float:
    """Inverse transform: -ln(u) / rate for u in (0, 1]."""
    return -math.log(u) / rate


def rng_exponential(rate: float, state: RngStream) -> float:
    if not rate > 0:
        raise ValueError("rate must be positive")
    return exponential_from_uniform(state.uniform(), rate)
