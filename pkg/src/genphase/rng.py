"""Deterministic, splittable random streams.

All randomness in the package flows through :class:`RngStream`, a thin
wrapper over numpy's counter-based Philox bit generator. Philox streams
are fully determined by (seed, spawn key), so the same seed reproduces
the same draws on every platform, and child streams with distinct keys
never overlap.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """A seeded random stream that can split off independent children.

    A stream is identified by a 64-bit seed plus a tuple of non-negative
    integer spawn indices. ``child(i, j, ...)`` derives a new stream with
    an extended key; parents and children share no state.

    Not thread-safe: concurrent workers must each own their own child.
    """

    def __init__(self, seed: int, _key: tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError("seed must be non-negative")
        self.seed = int(seed)
        self.key = tuple(int(i) for i in _key)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.Philox(seq))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key})"

    def child(self, *indices: int) -> "RngStream":
        """Split off an independent stream keyed by `indices`."""
        if not indices:
            raise ValueError("child() needs at least one index")
        if any(i < 0 for i in indices):
            raise ValueError("spawn indices must be non-negative")
        return RngStream(self.seed, self.key + tuple(indices))

    def standard_normal(self, size=None) -> np.ndarray:
        return self._gen.standard_normal(size)

    def normal(self, stddev: float, size=None) -> np.ndarray:
        """Zero-mean normal draws; stddev == 0 yields exact zeros."""
        if stddev == 0.0:
            return np.zeros(size if size is not None else ())
        return stddev * self._gen.standard_normal(size)

    def unit_vector(self, dim: int) -> np.ndarray:
        """Uniform draw from the unit sphere in R^dim."""
        v = self._gen.standard_normal(dim)
        return v / np.linalg.norm(v)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)
