import numpy as np
import pytest

from genphase import (DimensionError, RngStream, SsimConfig, dist_up_to_sign,
                      recon_error_per_pixel, sign_correct, ssim)


def test_dist_sign_flip_is_zero():
    assert dist_up_to_sign([1.0, 2.0], [-1.0, -2.0]) == 0.0
    assert dist_up_to_sign([1.0, 2.0], [1.0, 2.0]) == 0.0


def test_dist_symmetric_tie():
    assert abs(dist_up_to_sign([1.0, 0.0], [0.0, 1.0]) - np.sqrt(2)) < 1e-15


def test_dist_length_mismatch():
    with pytest.raises(DimensionError):
        dist_up_to_sign([1.0], [1.0, 2.0])


def test_dist_pseudometric_properties():
    rng = RngStream(17)
    for _ in range(50):
        a = rng.standard_normal(12)
        b = rng.standard_normal(12)
        c = rng.standard_normal(12)
        assert abs(dist_up_to_sign(a, b) - dist_up_to_sign(b, a)) < 1e-12
        assert dist_up_to_sign(a, b) <= (dist_up_to_sign(a, c)
                                         + dist_up_to_sign(c, b) + 1e-12)
        assert dist_up_to_sign(a, -a) == 0.0


def test_recon_error_basics():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    assert recon_error_per_pixel(x, x) == 0.0
    assert recon_error_per_pixel(-x, x) == 0.0
    eps = 1e-3
    perturbed = x.copy()
    perturbed[0] += eps
    assert abs(recon_error_per_pixel(perturbed, x) - eps ** 2 / 4) < 1e-18


def test_recon_error_sign_flip_invariant():
    rng = RngStream(23)
    a = rng.standard_normal(10)
    b = rng.standard_normal(10)
    assert recon_error_per_pixel(a, b) == recon_error_per_pixel(-a, b)
    assert recon_error_per_pixel(a, b) == recon_error_per_pixel(a, -b)


def test_sign_correct():
    x = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(sign_correct(-x, x), x)
    assert np.array_equal(sign_correct(x, x), x)


def test_sign_correct_tie_keeps_input():
    # orthogonal vectors: both signs equally far; keep the input
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    assert np.array_equal(sign_correct(a, b), a)


def _random_image(seed, h, w, low=0.0, high=1.0):
    u = (RngStream(seed).standard_normal(h * w) % 1.0 + 1.0) % 1.0
    return low + (high - low) * u


def test_ssim_self_is_one():
    x = _random_image(1, 16, 16)
    cfg = SsimConfig(16, 16, dynamic_range=1.0)
    assert abs(ssim(x, x, cfg) - 1.0) <= 1e-12


def test_ssim_constant_images_closed_form():
    # constant 0 vs constant L: means (0, L), all variances/covariances 0,
    # so every local score is (C1 * C2) / ((L^2 + C1) * C2) = C1 / (L^2 + C1)
    L = 1.0
    cfg = SsimConfig(12, 12, dynamic_range=L)
    c1 = (cfg.k1 * L) ** 2
    expected = c1 / (L ** 2 + c1)
    got = ssim(np.zeros(144), np.full(144, L), cfg)
    assert abs(got - expected) <= 1e-12


def test_ssim_symmetric():
    x = _random_image(2, 14, 14)
    y = _random_image(3, 14, 14)
    cfg = SsimConfig(14, 14)
    assert abs(ssim(x, y, cfg) - ssim(y, x, cfg)) <= 1e-12


def test_ssim_bounded_by_one():
    for seed in range(10):
        x = _random_image(seed, 13, 13)
        y = _random_image(seed + 100, 13, 13)
        assert ssim(x, y, SsimConfig(13, 13)) <= 1.0


def test_ssim_matches_skimage():
    skimage_metrics = pytest.importorskip("skimage.metrics")
    x = _random_image(5, 20, 24)
    y = _random_image(6, 20, 24)
    cfg = SsimConfig(20, 24, dynamic_range=1.0)
    ours = ssim(x, y, cfg)
    theirs = skimage_metrics.structural_similarity(
        x.reshape(20, 24), y.reshape(20, 24), win_size=11,
        gaussian_weights=True, sigma=1.5, use_sample_covariance=False,
        data_range=1.0)
    assert abs(ours - theirs) < 1e-6


def test_ssim_rejects_small_image():
    with pytest.raises(DimensionError):
        SsimConfig(8, 8)


def test_ssim_rejects_wrong_length():
    cfg = SsimConfig(12, 12)
    with pytest.raises(DimensionError):
        ssim(np.zeros(100), np.zeros(100), cfg)
