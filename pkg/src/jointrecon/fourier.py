"""Centered orthonormal FFTs and linear k-space convolution.

All functions act on the last two axes and broadcast over leading ones,
so a ``(C, kh, kw)`` kernel set convolves with an ``(H, W)`` grid in one
call.
"""
import numpy as np

from .core import check_kernel_shape

__all__ = [
    "fft2c",
    "ifft2c",
    "pad_center",
    "crop_center",
    "kspace_linear_conv",
    "kspace_linear_corr",
]

_AXES = (-2, -1)


def fft2c(x):
    """Centered 2-D DFT with ``1/sqrt(H*W)`` scaling."""
    x = np.asarray(x)
    return np.fft.fftshift(
        np.fft.fft2(np.fft.ifftshift(x, axes=_AXES), axes=_AXES, norm="ortho"),
        axes=_AXES,
    )


def ifft2c(x):
    """Inverse of :func:`fft2c`."""
    x = np.asarray(x)
    return np.fft.fftshift(
        np.fft.ifft2(np.fft.ifftshift(x, axes=_AXES), axes=_AXES, norm="ortho"),
        axes=_AXES,
    )


def _offsets(in_shape, out_shape):
    # aligns center sample (n // 2) of both grids
    return tuple(o // 2 - i // 2 for i, o in zip(in_shape, out_shape))


def pad_center(x, out_h, out_w):
    """Zero-pad the last two axes so the center sample lands on the new center."""
    x = np.asarray(x)
    h, w = x.shape[-2:]
    if out_h < h or out_w < w:
        raise ValueError(f"cannot pad {h}x{w} to smaller size {out_h}x{out_w}")
    r, c = _offsets((h, w), (out_h, out_w))
    out = np.zeros(x.shape[:-2] + (out_h, out_w), dtype=x.dtype)
    out[..., r : r + h, c : c + w] = x
    return out


def crop_center(x, out_h, out_w):
    """Extract the ``out_h x out_w`` window sharing the input's center sample.

    For input and output sizes of equal parity the window starts at
    ``(H - out_h) // 2``; otherwise the center-aligned start keeps
    ``crop_center`` a left inverse of :func:`pad_center`.
    """
    x = np.asarray(x)
    h, w = x.shape[-2:]
    if out_h > h or out_w > w:
        raise ValueError(f"cannot crop {h}x{w} to larger size {out_h}x{out_w}")
    r, c = _offsets((out_h, out_w), (h, w))
    return x[..., r : r + out_h, c : c + out_w]


def _padded_product(a, b, shape, conj_a=False):
    # circular convolution on a grid large enough to make it linear
    p, q = shape
    ia = ifft2c(pad_center(a, p, q))
    if conj_a:
        ia = ia.conj()
    ib = ifft2c(pad_center(b, p, q))
    return fft2c(ia * ib * np.sqrt(p * q))


def kspace_linear_conv(kernel, other):
    """Linear convolution of a small odd kernel with a grid, cropped to the grid.

    Both operands are padded to ``(H + kh - 1, W + kw - 1)``, multiplied
    point-wise in the image domain and transformed back; the result is the
    centered ``H x W`` window of the full linear convolution::

        out[i, j] = sum_{a, b} kernel[a, b] * other[i - a + kh // 2, j - b + kw // 2]

    Args:
        kernel (array): ``(..., kh, kw)`` complex, odd ``kh`` and ``kw``.
        other (array): ``(..., H, W)`` complex.

    Returns:
        array: ``(..., H, W)``.
    """
    kernel = np.asarray(kernel)
    other = np.asarray(other)
    kh, kw = kernel.shape[-2:]
    h, w = other.shape[-2:]
    check_kernel_shape(kh, kw, h, w)
    full = _padded_product(kernel, other, (h + kh - 1, w + kw - 1))
    return crop_center(full, h, w)


def kspace_linear_corr(kernel, other, out_h, out_w):
    """Linear correlation of ``other`` against ``kernel``, centered window.

    With indices measured from each array's center sample::

        out[d] = sum_i other[i] * conj(kernel[i - d])

    for the ``out_h x out_w`` window of shifts ``d`` around zero. This is
    the adjoint of :func:`kspace_linear_conv` in either argument:

    * kernel fixed: ``kspace_linear_corr(k, y, H, W)`` is the adjoint of
      ``x -> kspace_linear_conv(k, x)``;
    * grid fixed: ``kspace_linear_corr(m, y, kh, kw)`` is the adjoint of
      ``s -> kspace_linear_conv(s, m)``.
    """
    kernel = np.asarray(kernel)
    other = np.asarray(other)
    kh, kw = kernel.shape[-2:]
    h, w = other.shape[-2:]
    p = max(h + kh - 1, out_h)
    q = max(w + kw - 1, out_w)
    full = _padded_product(kernel, other, (p, q), conj_a=True)
    return crop_center(full, out_h, out_w)
