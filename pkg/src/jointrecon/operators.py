"""Bilinear forward model ``k_i = s_i * m`` and its two linearizations.

``A_m`` maps the image kernel to masked multicoil k-space with the map
kernels held fixed; ``A_s`` maps the map kernels with the image kernel
held fixed. Both adjoints are built from :func:`kspace_linear_corr` and
check out against the dot-product test.
"""
import numpy as np

from .fourier import kspace_linear_conv, kspace_linear_corr

__all__ = [
    "apply_mask",
    "forward_full",
    "forward_m",
    "adjoint_m",
    "normal_m",
    "forward_s",
    "adjoint_s",
    "normal_s",
]


def _check_maps(s):
    s = np.asarray(s)
    if s.ndim != 3:
        raise ValueError(f"map kernels must be (C, kh, kw), got shape {s.shape}")
    return s


def _check_grid(x, mask, name):
    x = np.asarray(x)
    if x.shape[-2:] != mask.shape:
        raise ValueError(f"{name} shape {x.shape} does not match mask {mask.shape}")
    return x


def _check_lambda(lam):
    if lam < 0:
        raise ValueError(f"regularization weight must be nonnegative, got {lam}")


def apply_mask(mask, data):
    """Zero the unsampled columns of ``(..., H, W)`` data."""
    return mask.apply(data)


def forward_full(s, m):
    """Fully sampled multicoil k-space ``s_i * m``, shape ``(C, H, W)``."""
    s = _check_maps(s)
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"image kernel must be (H, W), got shape {m.shape}")
    return kspace_linear_conv(s, m)


def forward_m(s, mask, m):
    """``A_m m``: masked k-space of image kernel ``m`` under maps ``s``."""
    m = _check_grid(m, mask, "image kernel")
    return mask.apply(forward_full(s, m))


def adjoint_m(s, mask, y):
    """``A_m^H y``: sum over coils of the correlation with each map kernel."""
    y = _check_grid(y, mask, "k-space")
    s = _check_maps(s)
    if y.shape[0] != s.shape[0]:
        raise ValueError(f"{y.shape[0]} coils of data but {s.shape[0]} map kernels")
    h, w = mask.shape
    return kspace_linear_corr(s, mask.apply(y), h, w).sum(axis=0)


def normal_m(s, mask, lam, m):
    """``(A_m^H A_m + 2 lam I) m``."""
    _check_lambda(lam)
    return adjoint_m(s, mask, forward_m(s, mask, m)) + 2 * lam * m


def forward_s(m, mask, s):
    """``A_s s``: coil ``i`` depends only on kernel ``s_i``."""
    m = _check_grid(m, mask, "image kernel")
    return mask.apply(kspace_linear_conv(_check_maps(s), m))


def adjoint_s(m, mask, y, kernel_shape):
    """``A_s^H y``: per coil, the ``kh x kw`` correlation of masked data with ``m``."""
    m = _check_grid(m, mask, "image kernel")
    y = _check_grid(y, mask, "k-space")
    kh, kw = kernel_shape
    return kspace_linear_corr(m, mask.apply(y), kh, kw)


def normal_s(m, mask, lam, s):
    """``(A_s^H A_s + 2 lam I) s``."""
    _check_lambda(lam)
    s = _check_maps(s)
    return adjoint_s(m, mask, forward_s(m, mask, s), s.shape[-2:]) + 2 * lam * s
