"""Robustness sweeps over acceleration factor and ACS size on phantoms."""
from dataclasses import dataclass

import numpy as np

from .core import ReconConfig
from .metrics import nmse, ssim
from .pipeline import reconstruct
from .simulate import CoilSpec, make_coil_maps, make_mask, make_phantom, shepp_logan, synthesize_kspace

__all__ = ["SweepSetup", "derive_seed", "scale_acs", "run_once", "run_sweep", "summarize", "CSV_HEADER"]

CSV_HEADER = ("kind", "axis", "value", "repeat", "seed", "accel", "acs", "ssim", "nmse", "ssim_std", "nmse_std")


@dataclass(frozen=True)
class SweepSetup:
    """Fixed part of a sweep; the swept axis overrides ``accel`` or ``acs``."""

    height: int = 64
    width: int = 64
    coils: int = 8
    sigma: float = 0.01
    accel: float = 4.0
    acs: int = 8
    kind: str = "random"
    config: ReconConfig = ReconConfig(map_kernel=(9, 5))


def derive_seed(seed, value_index, repeat):
    return int(np.random.SeedSequence([seed, value_index, repeat]).generate_state(1)[0])


def scale_acs(acs, width, ref_width):
    """Map an ACS size given for ``ref_width`` columns onto ``width`` columns."""
    return max(1, int(np.floor(acs * width / ref_width + 0.5)))


def run_once(setup, accel, acs, seed, d_maps=None, d_image=None):
    """Simulate, undersample, reconstruct and score one phantom acquisition."""
    truth = make_phantom(shepp_logan(setup.height, setup.width))
    maps = make_coil_maps(CoilSpec(setup.coils), setup.height, setup.width)
    k = synthesize_kspace(truth, maps, setup.sigma, seed=seed)
    mask = make_mask(setup.height, setup.width, accel, acs, kind=setup.kind, seed=seed + 1)
    img, _ = reconstruct(k, mask, setup.config, d_maps=d_maps, d_image=d_image)
    return ssim(img, truth.real), nmse(img, truth.real)


def run_sweep(axis, values, setup, repeats=1, seed=0, acs_ref_width=None, **denoisers):
    """One row per (value, repeat) followed by one summary row per value.

    ``axis`` is ``"accel"`` (values are R, ACS fixed at ``setup.acs``) or
    ``"acs"`` (values are ACS widths, R fixed at ``setup.accel``). With
    ``acs_ref_width`` the ACS values are rescaled to the phantom width.
    Rows are dicts keyed by :data:`CSV_HEADER`.
    """
    if axis not in ("accel", "acs"):
        raise ValueError(f"axis must be 'accel' or 'acs', got {axis!r}")
    values = list(values)
    if not values:
        raise ValueError("empty value list")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")

    runs = []
    for vi, value in enumerate(values):
        if axis == "accel":
            accel, acs = float(value), setup.acs
        else:
            accel = setup.accel
            acs = int(value) if acs_ref_width is None else scale_acs(value, setup.width, acs_ref_width)
        for rep in range(repeats):
            s = derive_seed(seed, vi, rep)
            q, e = run_once(setup, accel, acs, s, **denoisers)
            runs.append(dict(kind="run", axis=axis, value=value, repeat=rep, seed=s,
                             accel=accel, acs=acs, ssim=q, nmse=e, ssim_std="", nmse_std=""))
    return runs + summarize(runs)


def summarize(runs):
    out = []
    for value in dict.fromkeys(r["value"] for r in runs):
        group = [r for r in runs if r["value"] == value]
        q = np.array([r["ssim"] for r in group])
        e = np.array([r["nmse"] for r in group])
        ddof = 1 if len(group) > 1 else 0
        first = group[0]
        out.append(dict(kind="summary", axis=first["axis"], value=value, repeat="", seed="",
                        accel=first["accel"], acs=first["acs"],
                        ssim=float(q.mean()), nmse=float(e.mean()),
                        ssim_std=float(q.std(ddof=ddof)), nmse_std=float(e.std(ddof=ddof))))
    return out
