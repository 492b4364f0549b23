import numpy as np
import pytest
from skimage.metrics import structural_similarity

from jointrecon.metrics import center_crop, nmse, ssim, ssim_loss
from jointrecon.simulate import make_phantom, shepp_logan


@pytest.fixture
def img(rng):
    return rng.random((24, 20))


def test_nmse_identities(img):
    assert nmse(img, img) == 0
    assert nmse(np.zeros_like(img), img) == pytest.approx(1, abs=1e-12)
    assert nmse(2 * img, img) == pytest.approx(1, abs=1e-12)


def test_nmse_scale_law(rng, img):
    other = rng.random(img.shape)
    for a in (-3.0, 0.01, 7.5):
        assert nmse(a * other, a * img) == pytest.approx(nmse(other, img), abs=1e-12)


def test_nmse_zero_reference():
    with pytest.raises(ValueError, match="undefined"):
        nmse(np.ones((3, 3)), np.zeros((3, 3)))


def test_ssim_self_is_exactly_one(img):
    assert ssim(img, img) == 1.0


def test_ssim_constant_images_closed_form():
    a, b, k1, k2, L = 1.0, 0.5, 0.01, 0.03, 1.0
    c1, c2 = (k1 * L) ** 2, (k2 * L) ** 2
    expected = ((2 * a * b + c1) * c2) / ((a * a + b * b + c1) * c2)
    got = ssim(np.full((9, 9), a), np.full((9, 9), b), window=7, k1=k1, k2=k2, data_range=L)
    assert got == pytest.approx(expected, abs=1e-5)
    assert got == pytest.approx(1.0001 / 1.2501, abs=1e-12)


def test_ssim_symmetric(rng, img):
    other = rng.random(img.shape)
    assert ssim(img, other, data_range=1.0) == pytest.approx(ssim(other, img, data_range=1.0), abs=1e-10)


@pytest.mark.parametrize("window", [3, 7, 11])
def test_ssim_matches_skimage(rng, window):
    x = rng.random((32, 28))
    y = x + 0.1 * rng.standard_normal(x.shape)
    ref = structural_similarity(y, x, win_size=window, data_range=x.max(), gaussian_weights=False)
    assert ssim(y, x, window=window) == pytest.approx(ref, abs=1e-10)


def test_ssim_range_for_nonnegative_images(rng):
    x = rng.random((20, 20))
    for _ in range(10):
        y = np.abs(x + 0.3 * rng.standard_normal(x.shape))
        assert 0 < ssim(y, x, data_range=max(x.max(), y.max())) < 1


def test_ssim_argument_errors(img):
    with pytest.raises(ValueError):
        ssim(img, img, window=4)
    with pytest.raises(ValueError):
        ssim(img[:5, :5], img[:5, :5], window=7)
    with pytest.raises(ValueError):
        ssim(img, img, data_range=0)


def test_ssim_loss(img):
    assert ssim_loss(img, img) == -1
    y = img * 0.9
    assert ssim_loss(y, img) == -ssim(y, img)


def test_ssim_loss_grows_with_noise():
    truth = make_phantom(shepp_logan(48, 48)).real
    for seed in range(20):
        g = np.random.default_rng(seed).standard_normal(truth.shape)
        losses = [ssim_loss(truth + s * g, truth) for s in (0.01, 0.05, 0.2)]
        assert losses[0] < losses[1] < losses[2]


def test_center_crop():
    x = np.arange(30).reshape(5, 6)
    np.testing.assert_array_equal(center_crop(x, 3, 2), x[1:4, 2:4])
