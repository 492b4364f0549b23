"""Synthetic multicoil acquisitions: phantoms, coil profiles, masks, noise."""
from dataclasses import dataclass

import numpy as np

from .core import SamplingMask
from .fourier import fft2c

__all__ = [
    "Ellipse",
    "PhantomSpec",
    "CoilSpec",
    "shepp_logan",
    "make_phantom",
    "make_coil_maps",
    "synthesize_kspace",
    "sampling_budget",
    "make_mask",
]


@dataclass(frozen=True)
class Ellipse:
    """Ellipse in normalized coordinates (``x`` across width, ``y`` down rows)."""

    cx: float
    cy: float
    a: float
    b: float
    theta: float = 0.0
    intensity: float = 1.0


@dataclass(frozen=True)
class PhantomSpec:
    height: int
    width: int
    ellipses: tuple = ()


# modified Shepp-Logan: (intensity, a, b, x0, y0, angle in degrees)
_SHEPP_LOGAN = (
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
)


def shepp_logan(height, width):
    """Modified Shepp-Logan head phantom spec."""
    ellipses = tuple(
        Ellipse(x0, -y0, a, b, np.deg2rad(phi), rho)
        for rho, a, b, x0, y0, phi in _SHEPP_LOGAN
    )
    return PhantomSpec(height, width, ellipses)


def _coords(height, width):
    # pixel (H // 2, W // 2) sits at the origin; edges at -1
    y = (np.arange(height) - height // 2) / (height / 2)
    x = (np.arange(width) - width // 2) / (width / 2)
    return np.meshgrid(y, x, indexing="ij")


def make_phantom(spec):
    """Rasterize the ellipse phantom to an ``(H, W)`` complex grid in ``[0, 1]``."""
    y, x = _coords(spec.height, spec.width)
    img = np.zeros((spec.height, spec.width))
    for e in spec.ellipses:
        c, s = np.cos(e.theta), np.sin(e.theta)
        u = (x - e.cx) * c + (y - e.cy) * s
        v = -(x - e.cx) * s + (y - e.cy) * c
        img[(u / e.a) ** 2 + (v / e.b) ** 2 <= 1.0] += e.intensity
    return np.clip(img, 0.0, 1.0).astype(np.complex128)


@dataclass(frozen=True)
class CoilSpec:
    """Gaussian receive profiles on a ring around the field of view.

    Coil ``c`` sits at angle ``2 pi c / C`` on a circle of radius
    ``radius`` (normalized units), with magnitude
    ``exp(-d^2 / (2 width^2))`` and a phase that is linear in position
    along the coil direction (slope ``phase_slope`` rad per unit) plus the
    angle itself as offset.
    """

    coils: int = 8
    radius: float = 1.2
    width: float = 0.8
    phase_slope: float = 0.5


def make_coil_maps(spec, height, width):
    """``(C, H, W)`` image-domain sensitivities with pixelwise RSS equal to 1."""
    if spec.coils < 1:
        raise ValueError(f"need at least one coil, got {spec.coils}")
    y, x = _coords(height, width)
    angles = 2 * np.pi * np.arange(spec.coils) / spec.coils
    maps = np.empty((spec.coils, height, width), dtype=np.complex128)
    for i, t in enumerate(angles):
        cx, cy = spec.radius * np.cos(t), spec.radius * np.sin(t)
        mag = np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / (2 * spec.width**2))
        phase = spec.phase_slope * (x * np.cos(t) + y * np.sin(t)) + t
        maps[i] = mag * np.exp(1j * phase)
    norm = np.sqrt(np.sum(np.abs(maps) ** 2, axis=0))
    if not np.all(norm > 0):
        raise ValueError("coil profiles vanish somewhere in the field of view")
    return maps / norm


def synthesize_kspace(phantom, maps, noise_sigma, seed=0):
    """Coil k-space ``fft2c(maps_i * phantom)`` plus complex Gaussian noise.

    The noise has variance ``noise_sigma**2`` per complex sample.
    """
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be nonnegative, got {noise_sigma}")
    k = fft2c(np.asarray(maps) * np.asarray(phantom))
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((2,) + k.shape)
        k = k + noise_sigma * (g[0] + 1j * g[1]) / np.sqrt(2)
    return k


def sampling_budget(width, accel):
    """Number of sampled columns, ``round(W / R)`` with halves rounded up."""
    return max(1, int(np.floor(width / accel + 0.5)))


def make_mask(height, width, accel, acs_width, kind="random", seed=0):
    """Column undersampling mask with a centered ACS block.

    Args:
        accel (float): target acceleration ``R >= 1``.
        acs_width (int): fully sampled center columns.
        kind (str): ``"equispaced"`` or ``"random"`` placement of the
            columns outside the ACS block.
        seed (int): seed for ``"random"``.
    """
    if accel < 1:
        raise ValueError(f"acceleration must be >= 1, got {accel}")
    if not 0 <= acs_width <= width:
        raise ValueError(f"acs_width must lie in [0, {width}], got {acs_width}")
    if kind not in ("equispaced", "random"):
        raise ValueError(f"unknown mask kind {kind!r}")
    budget = sampling_budget(width, accel)
    if budget < acs_width:
        raise ValueError(
            f"ACS exceeds sampling budget ({acs_width} > {budget} columns)"
        )
    cols = np.zeros(width, dtype=bool)
    start = width // 2 - acs_width // 2
    cols[start : start + acs_width] = True
    candidates = np.flatnonzero(~cols)
    n = budget - acs_width
    if n:
        if kind == "equispaced":
            idx = np.floor((np.arange(n) + 0.5) * candidates.size / n).astype(int)
        else:
            rng = np.random.default_rng(seed)
            idx = rng.choice(candidates.size, size=n, replace=False)
        cols[candidates[idx]] = True
    return SamplingMask(height, cols, acs_width=acs_width)
