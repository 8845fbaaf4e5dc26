"""Gaussian measurement operators and magnitude-only observations.

The measurement model is y_i = |<a_i, x>| + e_i with the rows a_i drawn
i.i.d. N(0, I/m). Noise defaults to zero but additive Gaussian noise can
be requested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import gaussian_matrix, matvec
from .rng import RngStream


@dataclass(frozen=True)
class SensingModel:
    A: np.ndarray  # (m, n)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class Observation:
    y: np.ndarray      # (m,), nonnegative when noise is zero
    noise: np.ndarray  # (m,), the e_i actually added


def make_sensing(m: int, n: int, rng: RngStream) -> SensingModel:
    """Measurement matrix with i.i.d. N(0, 1/m) entries."""
    if m < 1 or n < 1:
        raise DimensionError(f"sensing dims must be >= 1, got m={m}, n={n}")
    return SensingModel(gaussian_matrix(m, n, 1.0 / np.sqrt(m), rng))


def observe(S: SensingModel, x_star, noise_std: float = 0.0,
            noise_rng: RngStream | None = None) -> Observation:
    """Magnitude-only observation y = |A x*| (+ optional Gaussian noise)."""
    magnitudes = np.abs(matvec(S.A, x_star))
    if noise_std > 0.0:
        if noise_rng is None:
            raise ValueError("noise_std > 0 requires a noise_rng")
        e = noise_rng.normal(noise_std, size=S.m)
    else:
        e = np.zeros(S.m)
    return Observation(magnitudes + e, e)
