"""Image quality metrics on real magnitude images."""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = ["nmse", "ssim", "ssim_loss", "center_crop"]


def nmse(x_hat, x):
    """Normalized squared error ``||x_hat - x||^2 / ||x||^2``."""
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x_hat.shape != x.shape:
        raise ValueError(f"shape mismatch {x_hat.shape} vs {x.shape}")
    ref = np.sum(x**2)
    if ref == 0:
        raise ValueError("NMSE is undefined for an all-zero reference")
    return float(np.sum((x_hat - x) ** 2) / ref)


def _window_mean(img, win):
    return sliding_window_view(img, (win, win)).mean(axis=(-2, -1))


def ssim(x_hat, x, window=7, k1=0.01, k2=0.03, data_range=None):
    """Mean SSIM over all fully interior ``window x window`` positions.

    Local statistics use uniform weights with the unbiased (``n - 1``)
    covariance estimate. ``data_range`` defaults to ``x.max()``.
    """
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x_hat.shape != x.shape or x.ndim != 2:
        raise ValueError(f"expected two images of equal 2-D shape, got {x_hat.shape}, {x.shape}")
    if window < 3 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 3, got {window}")
    if min(x.shape) < window:
        raise ValueError(f"images of shape {x.shape} are smaller than the window")
    if data_range is None:
        data_range = float(x.max())
    if not data_range > 0:
        raise ValueError("data_range must be positive")

    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    n = window * window
    cov = n / (n - 1)
    ma = _window_mean(x_hat, window)
    mb = _window_mean(x, window)
    va = cov * (_window_mean(x_hat * x_hat, window) - ma * ma)
    vb = cov * (_window_mean(x * x, window) - mb * mb)
    vab = cov * (_window_mean(x_hat * x, window) - ma * mb)
    num = (2 * ma * mb + c1) * (2 * vab + c2)
    den = (ma * ma + mb * mb + c1) * (va + vb + c2)
    return float(np.mean(num / den))


def ssim_loss(x_hat, x):
    return -ssim(x_hat, x)


def center_crop(img, height, width):
    img = np.asarray(img)
    h, w = img.shape[-2:]
    if height > h or width > w:
        raise ValueError(f"cannot crop {h}x{w} to {height}x{width}")
    r, c = (h - height) // 2, (w - width) // 2
    return img[..., r : r + height, c : c + width]
