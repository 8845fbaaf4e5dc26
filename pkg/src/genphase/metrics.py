"""Recovery-quality metrics.

Magnitude measurements destroy the global sign, so all distances here
are taken on the quotient by sign flip: dist(a, b) = min(||a-b||, ||a+b||).
SSIM follows the standard Wang et al. mean-SSIM: 11x11 Gaussian window
with sigma 1.5, K1 = 0.01, K2 = 0.03, valid-region (no padding)
convolution, Gaussian-weighted (uncorrected) local moments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError


def _check_pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(f"vector shapes differ: {a.shape} vs {b.shape}")
    return a, b


def dist_up_to_sign(a, b) -> float:
    """min(||a - b||, ||a + b||)."""
    a, b = _check_pair(a, b)
    return min(float(np.linalg.norm(a - b)), float(np.linalg.norm(a + b)))


def sign_correct(x_hat, x_star) -> np.ndarray:
    """Flip x_hat's global sign if -x_hat is closer to x_star (ties keep x_hat)."""
    x_hat, x_star = _check_pair(x_hat, x_star)
    if np.linalg.norm(x_hat - x_star) <= np.linalg.norm(x_hat + x_star):
        return x_hat
    return -x_hat


def recon_error_per_pixel(x_hat, x_star) -> float:
    """Sign-corrected squared error averaged over coordinates."""
    x_hat, x_star = _check_pair(x_hat, x_star)
    return dist_up_to_sign(x_hat, x_star) ** 2 / x_hat.shape[0]


def _gaussian_window(side: int, sigma: float) -> np.ndarray:
    r = (side - 1) / 2.0
    t = np.arange(side) - r
    w = np.exp(-(t ** 2) / (2.0 * sigma ** 2))
    return w / w.sum()


@dataclass(frozen=True)
class SsimConfig:
    height: int
    width: int
    dynamic_range: float = 1.0
    window_side: int = 11
    window_sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03

    def __post_init__(self):
        if self.dynamic_range <= 0:
            raise ValueError("dynamic_range must be positive")
        if self.height < self.window_side or self.width < self.window_side:
            raise DimensionError(
                f"image {self.height}x{self.width} smaller than "
                f"{self.window_side}x{self.window_side} window")


def _filter_valid(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable valid-region correlation with a symmetric 1-D kernel."""
    side = kernel.shape[0]
    rows = np.lib.stride_tricks.sliding_window_view(img, side, axis=0)
    out = rows @ kernel
    cols = np.lib.stride_tricks.sliding_window_view(out, side, axis=1)
    return cols @ kernel


def ssim(x, y, cfg: SsimConfig) -> float:
    """Mean structural similarity between two vectorized images."""
    x, y = _check_pair(x, y)
    n = cfg.height * cfg.width
    if x.shape[0] != n:
        raise DimensionError(
            f"vector length {x.shape[0]} != {cfg.height}x{cfg.width}")
    xi = x.reshape(cfg.height, cfg.width)
    yi = y.reshape(cfg.height, cfg.width)
    win = _gaussian_window(cfg.window_side, cfg.window_sigma)

    mu_x = _filter_valid(xi, win)
    mu_y = _filter_valid(yi, win)
    # Gaussian-weighted second moments, no sample-size correction
    var_x = _filter_valid(xi * xi, win) - mu_x * mu_x
    var_y = _filter_valid(yi * yi, win) - mu_y * mu_y
    cov = _filter_valid(xi * yi, win) - mu_x * mu_y

    c1 = (cfg.k1 * cfg.dynamic_range) ** 2
    c2 = (cfg.k2 * cfg.dynamic_range) ** 2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))
