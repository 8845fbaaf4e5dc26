"""Dense float64 matrix primitives with explicit shape checking.

Matrices are plain 2-D ``numpy.float64`` arrays (row-major). The helpers
here exist so callers get a clear :class:`DimensionError` instead of a
numpy broadcasting surprise, and so Gaussian matrix generation goes
through the seeded :class:`~genphase.rng.RngStream` machinery.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .rng import RngStream


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={a.ndim}")
    return a


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got ndim={v.ndim}")
    return v


def gaussian_matrix(rows: int, cols: int, stddev: float, rng: RngStream) -> np.ndarray:
    """rows x cols matrix of i.i.d. N(0, stddev^2) entries."""
    if rows < 1 or cols < 1:
        raise DimensionError(f"matrix dimensions must be >= 1, got {rows}x{cols}")
    if not np.isfinite(stddev) or stddev < 0:
        raise ValueError(f"stddev must be finite and >= 0, got {stddev}")
    return rng.normal(stddev, size=(rows, cols))


def matvec(A, x) -> np.ndarray:
    """A @ x with shape validation."""
    A, x = as_matrix(A), as_vector(x)
    if A.shape[1] != x.shape[0]:
        raise DimensionError(f"matvec: {A.shape} @ ({x.shape[0]},)")
    return A @ x


def matvec_transpose(A, u) -> np.ndarray:
    """A.T @ u with shape validation."""
    A, u = as_matrix(A), as_vector(u)
    if A.shape[0] != u.shape[0]:
        raise DimensionError(f"matvec_transpose: {A.shape}.T @ ({u.shape[0]},)")
    return A.T @ u
