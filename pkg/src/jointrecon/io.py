"""Binary and image file formats.

All integers are unsigned 32-bit little-endian and all floats 32-bit
little-endian.

MCK1 (multicoil k-space)::

    b"MCK1" | C | H | W | C*H*W complex samples as interleaved (re, im)

samples are coil-major then row-major.

MSK1 (column sampling mask)::

    b"MSK1" | H | W | acs_width | W bytes, each 0 or 1

PGM images are binary (P5), 16-bit big-endian, max-normalized; the scale
that recovers magnitudes is written to a sidecar text file.
"""
import struct
from pathlib import Path

import numpy as np

from .core import SamplingMask, check_finite

__all__ = [
    "FormatError",
    "write_mck",
    "read_mck",
    "mck_size",
    "write_mask",
    "read_mask",
    "mask_size",
    "write_pgm",
    "read_pgm",
]

MCK_MAGIC = b"MCK1"
MSK_MAGIC = b"MSK1"
_HEADER = struct.Struct("<4s3I")


class FormatError(ValueError):
    """Raised when a file does not follow its binary format."""


def mck_size(coils, height, width):
    return _HEADER.size + coils * height * width * 8


def mask_size(width):
    return _HEADER.size + width


def _read_bytes(path):
    path = Path(path)
    try:
        return path.read_bytes()
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror}") from e


def _write_bytes(path, payload):
    path = Path(path)
    try:
        path.write_bytes(payload)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror}") from e


def write_mck(data, path):
    """Write ``(C, H, W)`` complex k-space to ``path`` in MCK1 format."""
    data = np.asarray(data)
    if data.ndim != 3 or 0 in data.shape:
        raise ValueError(f"multicoil k-space must be (C, H, W), got shape {data.shape}")
    samples = data.astype(np.complex64)
    check_finite(samples, "k-space")
    c, h, w = samples.shape
    payload = np.empty((c, h, w, 2), dtype="<f4")
    payload[..., 0] = samples.real
    payload[..., 1] = samples.imag
    _write_bytes(path, _HEADER.pack(MCK_MAGIC, c, h, w) + payload.tobytes())


def read_mck(path):
    """Read an MCK1 file into a ``(C, H, W)`` complex64 array."""
    raw = _read_bytes(path)
    if len(raw) < _HEADER.size or raw[:4] != MCK_MAGIC:
        raise FormatError(f"{path}: not an MCK file")
    _, c, h, w = _HEADER.unpack_from(raw)
    expected = mck_size(c, h, w)
    if len(raw) != expected:
        raise FormatError(
            f"{path}: size mismatch, expected {expected} bytes, got {len(raw)}"
        )
    if min(c, h, w) == 0:
        raise FormatError(f"{path}: empty dimensions {c}x{h}x{w}")
    pairs = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(c, h, w, 2)
    out = np.empty((c, h, w), dtype=np.complex64)
    out.real = pairs[..., 0]
    out.imag = pairs[..., 1]
    return out


def write_mask(mask, path):
    """Write a :class:`SamplingMask` in MSK1 format."""
    cols = mask.columns.astype(np.uint8)
    header = _HEADER.pack(MSK_MAGIC, mask.height, mask.width, mask.acs_width)
    _write_bytes(path, header + cols.tobytes())


def read_mask(path):
    raw = _read_bytes(path)
    if len(raw) < _HEADER.size or raw[:4] != MSK_MAGIC:
        raise FormatError(f"{path}: not an MSK file")
    _, h, w, acs = _HEADER.unpack_from(raw)
    expected = mask_size(w)
    if len(raw) != expected:
        raise FormatError(
            f"{path}: size mismatch, expected {expected} bytes, got {len(raw)}"
        )
    cols = np.frombuffer(raw, dtype=np.uint8, offset=_HEADER.size)
    if np.any(cols > 1):
        raise FormatError(f"{path}: malformed mask, column bytes must be 0 or 1")
    try:
        return SamplingMask(h, cols.astype(bool), acs_width=acs)
    except ValueError as e:
        raise FormatError(f"{path}: malformed mask, {e}") from e


def write_pgm(image, path):
    """Write a nonnegative real image as a 16-bit PGM.

    The image is divided by its maximum; the returned scale (the maximum,
    or 1.0 for an all-zero image) multiplies the stored integers / 65535
    back to magnitudes. The caller decides where to record it.
    """
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise ValueError("PGM images must be 2-D")
    check_finite(image, "image")
    if np.any(image < 0):
        raise ValueError("PGM images must be nonnegative")
    scale = float(image.max()) or 1.0
    levels = np.rint(image / scale * 65535).astype(">u2")
    h, w = image.shape
    _write_bytes(path, f"P5\n{w} {h}\n65535\n".encode("ascii") + levels.tobytes())
    return scale


def read_pgm(path, scale=1.0):
    """Read a binary 16-bit (or 8-bit) PGM as floats in ``[0, scale]``."""
    raw = _read_bytes(path)
    tokens = []
    pos = 0
    # header: magic, width, height, maxval, separated by whitespace; '#' comments
    while len(tokens) < 4:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PGM header")
        tokens.append(raw[start:pos])
    pos += 1
    if tokens[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    w, h, maxval = (int(t) for t in tokens[1:])
    dtype = ">u2" if maxval > 255 else "u1"
    count = w * h
    body = raw[pos:]
    if len(body) != count * np.dtype(dtype).itemsize:
        raise FormatError(f"{path}: size mismatch in PGM payload")
    levels = np.frombuffer(body, dtype=dtype).reshape(h, w)
    return levels.astype(np.float64) / maxval * scale
