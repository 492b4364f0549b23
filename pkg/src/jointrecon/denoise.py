"""Denoisers used as priors on the image and map kernels.

A denoiser is any callable taking a real ``(channels, H, W)`` stack and
returning a stack of the same shape. Complex images enter as two real
channels per complex image: channel ``2 i`` holds the real part and
``2 i + 1`` the imaginary part of image ``i``.

:func:`wrap_kspace` moves a k-space variable into that representation,
applies the denoiser and moves the result back.
"""
import math
import struct
from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage

from .core import check_finite
from .fourier import crop_center, fft2c, ifft2c, pad_center
from .io import FormatError

__all__ = [
    "denoise_zero",
    "denoise_identity",
    "denoise_gaussian",
    "gaussian_denoiser",
    "ResNetWeights",
    "resnet_apply",
    "ResNetDenoiser",
    "random_weights",
    "read_weights",
    "write_weights",
    "weights_size",
    "complex_to_channels",
    "channels_to_complex",
    "wrap_kspace",
]


def denoise_zero(x):
    return np.zeros_like(x)


def denoise_identity(x):
    return x


def _gaussian_taps(sigma):
    radius = math.ceil(3 * sigma)
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-0.5 * (t / sigma) ** 2)
    return taps / taps.sum()


def denoise_gaussian(x, sigma):
    """Per-channel Gaussian smoothing.

    The kernel is truncated at radius ``ceil(3 sigma)`` and renormalized;
    borders are reflected about the edge sample (``d c b | a b c d``).
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.asarray(x, dtype=np.float64)
    taps = _gaussian_taps(sigma)
    out = ndimage.correlate1d(x, taps, axis=-2, mode="mirror")
    return ndimage.correlate1d(out, taps, axis=-1, mode="mirror")


def gaussian_denoiser(sigma):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return partial(denoise_gaussian, sigma=sigma)


@dataclass(frozen=True)
class ResNetWeights:
    """Weights of a stack of residual blocks.

    ``blocks`` is a list of ``(w1, b1, w2, b2)`` with ``w1`` of shape
    ``(hidden, io, 3, 3)`` and ``w2`` of shape ``(io, hidden, 3, 3)``;
    every block maps ``io`` channels to ``io`` channels.
    """

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(
            tuple(np.asarray(a, dtype=np.float32) for a in block) for block in self.blocks
        )
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("a residual network needs at least one block")
        io, hidden = self.channels_io, self.channels_hidden
        for i, (w1, b1, w2, b2) in enumerate(blocks):
            if (
                w1.shape != (hidden, io, 3, 3)
                or b1.shape != (hidden,)
                or w2.shape != (io, hidden, 3, 3)
                or b2.shape != (io,)
            ):
                raise ValueError(f"block {i} has inconsistent weight shapes")
            for a in (w1, b1, w2, b2):
                check_finite(a, f"block {i} weights")

    @property
    def num_blocks(self):
        return len(self.blocks)

    @property
    def channels_io(self):
        return self.blocks[0][0].shape[1]

    @property
    def channels_hidden(self):
        return self.blocks[0][0].shape[0]


def _conv3x3(x, w, b):
    # cross-correlation, stride 1, zero padding 1
    xp = np.pad(x, ((0, 0), (1, 1), (1, 1)))
    win = sliding_window_view(xp, (3, 3), axis=(1, 2))
    return np.einsum("oikl,ihwkl->ohw", w, win, optimize=True) + b[:, None, None]


def resnet_apply(weights, x):
    """Run the residual network on a ``(channels_io, H, W)`` stack.

    Each block computes ``act(conv2(relu(conv1(x))) + x)`` with ``act`` a
    ReLU, except in the last block where it is linear.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or x.shape[0] != weights.channels_io:
        raise ValueError(
            f"expected ({weights.channels_io}, H, W) input, got shape {x.shape}"
        )
    last = weights.num_blocks - 1
    for i, (w1, b1, w2, b2) in enumerate(weights.blocks):
        h = np.maximum(_conv3x3(x, w1.astype(np.float64), b1.astype(np.float64)), 0)
        x = _conv3x3(h, w2.astype(np.float64), b2.astype(np.float64)) + x
        if i < last:
            x = np.maximum(x, 0)
    return x


class ResNetDenoiser:
    def __init__(self, weights):
        self.weights = weights

    def __call__(self, x):
        return resnet_apply(self.weights, x)

    @classmethod
    def from_file(cls, path):
        return cls(read_weights(path))


def random_weights(num_blocks, channels_io, channels_hidden, scale=0.05, seed=0):
    """Small random weights, for tests and demos without a trained model."""
    rng = np.random.default_rng(seed)
    blocks = []
    for _ in range(num_blocks):
        blocks.append(
            (
                scale * rng.standard_normal((channels_hidden, channels_io, 3, 3)),
                scale * rng.standard_normal(channels_hidden),
                scale * rng.standard_normal((channels_io, channels_hidden, 3, 3)),
                scale * rng.standard_normal(channels_io),
            )
        )
    return ResNetWeights(tuple(blocks))


# DJW1: magic | num_blocks | channels_io | channels_hidden (u32 LE)
#       then per block: w1 (hidden, io, 3, 3), b1, w2 (io, hidden, 3, 3), b2 as f32 LE
_DJW_HEADER = struct.Struct("<4s3I")
DJW_MAGIC = b"DJW1"


def weights_size(num_blocks, channels_io, channels_hidden):
    per_block = 2 * channels_hidden * channels_io * 9 + channels_hidden + channels_io
    return _DJW_HEADER.size + 4 * num_blocks * per_block


def write_weights(weights, path):
    parts = [
        _DJW_HEADER.pack(
            DJW_MAGIC, weights.num_blocks, weights.channels_io, weights.channels_hidden
        )
    ]
    for block in weights.blocks:
        parts.extend(a.astype("<f4").tobytes() for a in block)
    Path(path).write_bytes(b"".join(parts))


def read_weights(path):
    raw = Path(path).read_bytes()
    if len(raw) < _DJW_HEADER.size or raw[:4] != DJW_MAGIC:
        raise FormatError(f"{path}: not a DJW file")
    _, nb, io, hidden = _DJW_HEADER.unpack_from(raw)
    expected = weights_size(nb, io, hidden)
    if len(raw) != expected:
        raise FormatError(
            f"{path}: size mismatch, expected {expected} bytes, got {len(raw)}"
        )
    flat = np.frombuffer(raw, dtype="<f4", offset=_DJW_HEADER.size)
    shapes = [(hidden, io, 3, 3), (hidden,), (io, hidden, 3, 3), (io,)]
    blocks, pos = [], 0
    for _ in range(nb):
        block = []
        for shape in shapes:
            n = math.prod(shape)
            block.append(flat[pos : pos + n].reshape(shape))
            pos += n
        blocks.append(tuple(block))
    try:
        return ResNetWeights(tuple(blocks))
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e


def complex_to_channels(z):
    """``(n, H, W)`` complex -> ``(2 n, H, W)`` real, (re, im) interleaved."""
    z = np.asarray(z)
    out = np.empty((2 * z.shape[0],) + z.shape[1:], dtype=np.float64)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def channels_to_complex(x):
    x = np.asarray(x)
    return x[0::2] + 1j * x[1::2]


def _apply_stack(denoiser, z):
    out = np.asarray(denoiser(complex_to_channels(z)))
    if out.shape != (2 * z.shape[0],) + z.shape[1:]:
        raise ValueError(f"denoiser changed the stack shape to {out.shape}")
    return channels_to_complex(out)


def wrap_kspace(denoiser, x, grid_shape=None):
    """Apply an image-domain denoiser to a k-space variable.

    Args:
        denoiser (callable): real stack -> real stack.
        x (array): image kernel ``(H, W)`` or map kernel set ``(C, kh, kw)``.
        grid_shape (tuple): ``(H, W)`` acquisition grid; required for map
            kernels, which are zero-padded to it before the inverse FFT and
            cropped back to ``kh x kw`` afterwards.

    Returns:
        array: same shape as ``x``.
    """
    x = np.asarray(x)
    if denoiser is denoise_zero:
        return np.zeros_like(x)
    if denoiser is denoise_identity:
        return x.copy()
    if x.ndim == 2:
        img = ifft2c(x)[None]
        return fft2c(_apply_stack(denoiser, img))[0]
    if x.ndim == 3:
        if grid_shape is None:
            raise ValueError("grid_shape is required for map kernels")
        h, w = grid_shape
        kh, kw = x.shape[-2:]
        img = ifft2c(pad_center(x, h, w))
        return crop_center(fft2c(_apply_stack(denoiser, img)), kh, kw)
    raise ValueError(f"expected an image kernel or map kernel set, got shape {x.shape}")
