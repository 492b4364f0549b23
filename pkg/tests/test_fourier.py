import numpy as np
import pytest

from jointrecon.fourier import (
    crop_center,
    fft2c,
    ifft2c,
    kspace_linear_conv,
    kspace_linear_corr,
    pad_center,
)
from oracles import brute_conv, crandn


def test_center_impulse_has_flat_spectrum():
    x = np.zeros((4, 4), complex)
    x[2, 2] = 1
    np.testing.assert_allclose(fft2c(x), np.full((4, 4), 0.25), atol=1e-12)


def test_flat_grid_inverts_to_center_impulse():
    x = np.full((4, 6), 1 / np.sqrt(24), complex)
    expected = np.zeros((4, 6))
    expected[2, 3] = 1
    np.testing.assert_allclose(ifft2c(x), expected, atol=1e-12)


@pytest.mark.parametrize("shape", [(1, 1), (4, 4), (5, 8), (7, 3), (8, 8)])
def test_inversion_and_parseval(rng, shape):
    x = crandn(rng, *shape)
    np.testing.assert_allclose(ifft2c(fft2c(x)), x, rtol=1e-6, atol=1e-12)
    np.testing.assert_allclose(fft2c(ifft2c(x)), x, rtol=1e-6, atol=1e-12)
    assert np.linalg.norm(fft2c(x)) == pytest.approx(np.linalg.norm(x), rel=1e-6)
    assert np.linalg.norm(ifft2c(x)) == pytest.approx(np.linalg.norm(x), rel=1e-6)


def test_fft_broadcasts_over_leading_axes(rng):
    x = crandn(rng, 3, 5, 6)
    np.testing.assert_allclose(fft2c(x)[1], fft2c(x[1]))


def test_pad_single_sample():
    out = pad_center(np.array([[7.0 + 1j]]), 3, 3)
    expected = np.zeros((3, 3), complex)
    expected[1, 1] = 7 + 1j
    np.testing.assert_array_equal(out, expected)


@pytest.mark.parametrize("h,w,p,q", [(3, 3, 7, 9), (4, 5, 8, 8), (4, 4, 5, 7), (1, 2, 4, 3)])
def test_crop_inverts_pad(rng, h, w, p, q):
    x = crandn(rng, h, w)
    padded = pad_center(x, p, q)
    assert padded[p // 2, q // 2] == x[h // 2, w // 2]
    np.testing.assert_array_equal(crop_center(padded, h, w), x)


def test_pad_and_crop_same_size_are_identity(rng):
    x = crandn(rng, 4, 5)
    np.testing.assert_array_equal(pad_center(x, 4, 5), x)
    np.testing.assert_array_equal(crop_center(x, 4, 5), x)


def test_crop_windows():
    x = np.arange(16).reshape(4, 4)
    np.testing.assert_array_equal(crop_center(x, 2, 2), x[1:3, 1:3])
    assert crop_center(np.arange(9).reshape(3, 3), 1, 1)[0, 0] == 4


def test_pad_crop_dimension_errors(rng):
    x = crandn(rng, 4, 4)
    with pytest.raises(ValueError):
        pad_center(x, 3, 5)
    with pytest.raises(ValueError):
        crop_center(x, 5, 4)


def test_impulse_kernel_is_identity(rng):
    x = crandn(rng, 6, 7)
    np.testing.assert_allclose(kspace_linear_conv(np.ones((1, 1)), x), x, rtol=1e-6, atol=1e-12)
    k = np.zeros((3, 5), complex)
    k[1, 2] = 1
    np.testing.assert_allclose(kspace_linear_conv(k, x), x, rtol=1e-6, atol=1e-12)


def test_zero_kernel_gives_zero(rng):
    out = kspace_linear_conv(np.zeros((3, 3)), crandn(rng, 6, 6))
    np.testing.assert_allclose(out, 0, atol=1e-15)


def test_conv_matches_brute_force(rng):
    k, x = crandn(rng, 3, 3), crandn(rng, 6, 6)
    ref = brute_conv(k, x)
    assert np.linalg.norm(kspace_linear_conv(k, x) - ref) <= 1e-5 * np.linalg.norm(ref)


def test_conv_rejects_even_or_oversized_kernels(rng):
    with pytest.raises(ValueError, match="odd"):
        kspace_linear_conv(crandn(rng, 2, 3), crandn(rng, 6, 6))
    with pytest.raises(ValueError, match="larger"):
        kspace_linear_conv(crandn(rng, 7, 3), crandn(rng, 6, 6))


def test_conv_bilinearity(rng):
    k, x, z = crandn(rng, 3, 5), crandn(rng, 7, 6), crandn(rng, 7, 6)
    a, b = 0.3 - 1.2j, 2.0 + 0.5j
    lhs = kspace_linear_conv(k, a * x + b * z)
    rhs = a * kspace_linear_conv(k, x) + b * kspace_linear_conv(k, z)
    assert np.linalg.norm(lhs - rhs) <= 1e-6 * np.linalg.norm(rhs)


def _adjoint_error(fx, x, y, ahy):
    return abs(np.vdot(fx, y) - np.vdot(x, ahy)) / (np.linalg.norm(x) * np.linalg.norm(y))


@pytest.mark.parametrize("kh,kw,h,w", [(3, 3, 6, 6), (5, 3, 8, 7), (1, 5, 4, 5), (3, 1, 5, 4)])
def test_corr_is_adjoint_with_kernel_fixed(rng, kh, kw, h, w):
    k, x, y = crandn(rng, kh, kw), crandn(rng, h, w), crandn(rng, h, w)
    err = _adjoint_error(kspace_linear_conv(k, x), x, y, kspace_linear_corr(k, y, h, w))
    assert err <= 1e-6


@pytest.mark.parametrize("kh,kw,h,w", [(3, 3, 6, 6), (5, 3, 8, 7), (1, 5, 4, 5), (5, 5, 5, 6)])
def test_corr_is_adjoint_with_grid_fixed(rng, kh, kw, h, w):
    s, m, y = crandn(rng, kh, kw), crandn(rng, h, w), crandn(rng, h, w)
    err = _adjoint_error(kspace_linear_conv(s, m), s, y, kspace_linear_corr(m, y, kh, kw))
    assert err <= 1e-6


def test_corr_with_impulse_is_identity(rng):
    y = crandn(rng, 5, 6)
    np.testing.assert_allclose(kspace_linear_corr(np.ones((1, 1)), y, 5, 6), y, atol=1e-12)


def test_corr_of_zero_is_zero(rng):
    out = kspace_linear_corr(crandn(rng, 3, 3), np.zeros((6, 6), complex), 6, 6)
    np.testing.assert_allclose(out, 0, atol=1e-15)
