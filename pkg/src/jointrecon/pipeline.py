"""Unrolled alternating reconstruction of image and map kernels.

One outer iteration refines the map kernels (CG on the regularized
least-squares problem, then the denoiser assignment) and then the image
kernel in the same way. The final image is the root sum-of-squares of the
coil images ``F^-1 {s_i * m}``.
"""
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from .cg import cg_solve
from .core import ReconConfig, as_complex, check_kernel_shape
from .denoise import denoise_identity, denoise_zero, wrap_kspace
from .fourier import crop_center, fft2c, ifft2c
from .operators import adjoint_m, adjoint_s, forward_full, normal_m, normal_s

__all__ = [
    "ReconState",
    "resolve_denoisers",
    "rss",
    "rss_init",
    "objective",
    "regularized_objective",
    "update_maps",
    "update_image",
    "final_image",
    "zero_filled_rss",
    "reconstruct",
]


@dataclass
class ReconState:
    """Current iterate of the unrolled scheme.

    ``objective_history`` holds the data term ``0.5 ||y - A(s * m)||^2``
    at initialization and after every outer iteration; ``penalty_history``
    the matching regularizer values ``lambda ||D(x) - x||^2`` summed over
    both variables.
    """

    m: np.ndarray
    s: np.ndarray
    outer_index: int = 0
    objective_history: list = field(default_factory=list)
    penalty_history: list = field(default_factory=list)


def resolve_denoisers(cfg, d_maps=None, d_image=None):
    """Denoiser pair ``(D_s, D_m)`` implied by the mode.

    jsense always uses zero denoisers; modl always uses the identity on the
    maps and needs an image denoiser; deep-jsense needs both.
    """
    if cfg.mode == "jsense":
        return denoise_zero, denoise_zero
    if cfg.mode == "modl":
        if d_image is None:
            raise ValueError("modl mode needs an image denoiser")
        return denoise_identity, d_image
    if d_maps is None or d_image is None:
        raise ValueError("deep-jsense mode needs both a map and an image denoiser")
    return d_maps, d_image


def rss(coil_images, axis=0):
    return np.sqrt(np.sum(np.abs(coil_images) ** 2, axis=axis))


def _prepare(y, mask):
    y = as_complex(y, 3, "k-space")
    if y.shape[-2:] != mask.shape:
        raise ValueError(f"k-space shape {y.shape} does not match mask {mask.shape}")
    return mask.apply(y)


def zero_filled_rss(y, mask):
    """RSS of the zero-filled coil images."""
    return rss(ifft2c(_prepare(y, mask)))


def rss_init(y, mask, cfg):
    """Initial kernels from the zero-filled coil images.

    ``m`` is the k-space of the RSS image ``r``; ``s_i`` is the central
    ``kh x kw`` k-space window of ``c_i / (r + eps)``, divided by
    ``sqrt(H W)`` so that ``s_i * m`` approximates the coil k-space under
    the orthonormal FFT convention.
    """
    y = _prepare(y, mask)
    h, w = mask.shape
    kh, kw = cfg.map_kernel
    check_kernel_shape(kh, kw, h, w)
    coils = ifft2c(y)
    r = rss(coils)
    eps = cfg.epsilon_rss * (r.max() or 1.0)
    m = fft2c(r.astype(np.complex128))
    s = crop_center(fft2c(coils / (r + eps)), kh, kw) / np.sqrt(h * w)
    state = ReconState(m=m, s=np.ascontiguousarray(s))
    return state


def objective(state, y, mask):
    """Data-consistency term ``0.5 ||y - A(s * m)||^2``."""
    y = _prepare(y, mask)
    resid = mask.apply(y - forward_full(state.s, state.m))
    return 0.5 * float(np.vdot(resid, resid).real)


def _penalty(x, lam, denoiser, grid_shape=None):
    if lam == 0:
        return 0.0
    if denoiser is denoise_identity:
        return 0.0
    d = wrap_kspace(denoiser, x, grid_shape) - x
    return lam * float(np.vdot(d, d).real)


def regularized_objective(state, y, mask, cfg, d_maps=None, d_image=None):
    """Data term plus ``lambda_s ||D_s(s) - s||^2 + lambda_m ||D_m(m) - m||^2``.

    In jsense mode the penalties reduce to ``lambda ||x||^2``, and this is
    the quantity every CG step decreases.
    """
    d_s, d_m = resolve_denoisers(cfg, d_maps, d_image)
    return objective(state, y, mask) + _penalty(
        state.s, cfg.lambda_s, d_s, mask.shape
    ) + _penalty(state.m, cfg.lambda_m, d_m)


def _cg_callback(callback, stage, state, name):
    if callback is None:
        return None

    def hook(k, x):
        callback(stage, replace(state, **{name: x}))

    return hook


def update_maps(state, y, mask, cfg, d_maps, callback=None):
    """CG refit of the map kernels followed by the denoiser assignment."""
    if cfg.mode == "modl" or (cfg.cg_iters_maps == 0 and d_maps is denoise_identity):
        return state
    y = _prepare(y, mask)
    s = state.s
    if cfg.cg_iters_maps > 0:
        z = wrap_kspace(d_maps, s, mask.shape)
        rhs = adjoint_s(state.m, mask, y, s.shape[-2:]) + 2 * cfg.lambda_s * z
        op = partial(normal_s, state.m, mask, cfg.lambda_s)
        s, _ = cg_solve(
            op, rhs, s, cfg.cg_iters_maps,
            callback=_cg_callback(callback, "maps", state, "s"),
        )
    if cfg.mode != "jsense":
        s = wrap_kspace(d_maps, s, mask.shape)
    return replace(state, s=s)


def update_image(state, y, mask, cfg, d_image, callback=None):
    """CG refit of the image kernel followed by the denoiser assignment."""
    y = _prepare(y, mask)
    m = state.m
    z = wrap_kspace(d_image, m)
    rhs = adjoint_m(state.s, mask, y) + 2 * cfg.lambda_m * z
    op = partial(normal_m, state.s, mask, cfg.lambda_m)
    m, _ = cg_solve(
        op, rhs, m, cfg.cg_iters_image,
        callback=_cg_callback(callback, "image", state, "m"),
    )
    if cfg.mode != "jsense":
        m = wrap_kspace(d_image, m)
    return replace(state, m=m)


def final_image(state):
    """RSS of the coil images ``F^-1 {s_i * m}``."""
    return rss(ifft2c(forward_full(state.s, state.m)))


def reconstruct(y, mask, cfg=None, d_maps=None, d_image=None, init=None, callback=None):
    """Run the full unrolled reconstruction.

    Args:
        y (array): ``(C, H, W)`` k-space; unsampled columns are ignored.
        mask (SamplingMask): acquired columns.
        cfg (ReconConfig): hyperparameters and mode.
        d_maps, d_image (callable): denoisers, see :func:`resolve_denoisers`.
        init (ReconState): starting kernels; defaults to :func:`rss_init`.
        callback (callable): ``callback(stage, state)`` after every CG step
            (stage ``"maps"`` or ``"image"``) and every outer iteration
            (stage ``"outer"``).

    Returns:
        tuple: ``(image, state)`` with the ``(H, W)`` nonnegative image.
    """
    cfg = cfg or ReconConfig()
    d_s, d_m = resolve_denoisers(cfg, d_maps, d_image)
    y = _prepare(y, mask)
    state = rss_init(y, mask, cfg) if init is None else replace(
        init, m=as_complex(init.m, 2, "image kernel").copy(),
        s=as_complex(init.s, 3, "map kernels").copy(),
        objective_history=[], penalty_history=[],
    )

    def record(st):
        data = objective(st, y, mask)
        total = regularized_objective(st, y, mask, cfg, d_s, d_m)
        st.objective_history.append(data)
        st.penalty_history.append(total - data)

    record(state)
    for n in range(cfg.outer_iters):
        state = update_maps(state, y, mask, cfg, d_s, callback)
        state = update_image(state, y, mask, cfg, d_m, callback)
        state.outer_index = n + 1
        record(state)
        if callback is not None:
            callback("outer", state)
    return final_image(state), state
