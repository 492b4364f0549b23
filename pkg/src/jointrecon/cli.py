"""Command-line entry points.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""
import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cg import CgBreakdown
from .core import MODES, ReconConfig
from .denoise import ResNetDenoiser, gaussian_denoiser
from .io import FormatError, read_mask, read_mck, read_pgm, write_mask, write_mck, write_pgm
from .metrics import center_crop, nmse, ssim
from .pipeline import reconstruct
from .simulate import CoilSpec, make_coil_maps, make_mask, make_phantom, shepp_logan, synthesize_kspace
from .sweep import CSV_HEADER, SweepSetup, run_sweep

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def _dims(text):
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}") from None


def _values(tokens):
    """Expand ``start:stop:step`` tokens (inclusive) and plain numbers."""
    out = []
    for tok in tokens:
        if ":" in tok:
            start, stop, step = (float(t) for t in tok.split(":"))
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            out.extend(round(start + i * step, 10) for i in range(n))
        else:
            out.append(float(tok))
    return out


def _write_manifest(path, params):
    lines = [f"{k}={params[k]}" for k in sorted(params)]
    Path(path).write_text("\n".join(lines) + "\n")


def _save_image(image, path):
    scale = write_pgm(image, path)
    Path(f"{path}.scale").write_text(f"{scale!r}\n")


def _load_image(path):
    sidecar = Path(f"{path}.scale")
    scale = float(sidecar.read_text()) if sidecar.exists() else 1.0
    return read_pgm(path, scale)


def cmd_simulate(args):
    if args.h < 1 or args.w < 1:
        raise UsageError("--h and --w must be positive")
    if args.coils < 1:
        raise UsageError("--coils must be >= 1")
    if args.sigma < 0:
        raise UsageError("--sigma must be nonnegative")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    phantom = make_phantom(shepp_logan(args.h, args.w))
    maps = make_coil_maps(CoilSpec(args.coils), args.h, args.w)
    k = synthesize_kspace(phantom, maps, args.sigma, seed=args.seed)
    write_mck(k, out / "kspace.mck")
    _save_image(phantom.real, out / "truth.pgm")
    _write_manifest(out / "manifest.txt", {
        "h": args.h, "w": args.w, "coils": args.coils, "sigma": args.sigma,
        "seed": args.seed, "phantom": "shepp-logan", "coil_radius": CoilSpec().radius,
        "coil_width": CoilSpec().width, "coil_phase_slope": CoilSpec().phase_slope,
    })


def cmd_mask(args):
    try:
        mask = make_mask(args.h, args.w, args.accel, args.acs, kind=args.kind, seed=args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    write_mask(mask, args.out)


def _build_config(args):
    n1 = args.cg_maps
    if n1 is None:
        n1 = 0 if args.mode == "modl" else 6
    try:
        return ReconConfig(
            outer_iters=args.outer, cg_iters_maps=n1, cg_iters_image=args.cg_image,
            lambda_m=args.lambda_m, lambda_s=args.lambda_s, map_kernel=args.kernel,
            mode=args.mode, epsilon_rss=args.epsilon_rss,
        )
    except ValueError as e:
        raise UsageError(str(e)) from e


def cmd_reconstruct(args):
    cfg = _build_config(args)
    d_maps = d_image = None
    if args.mode == "deep-jsense":
        if args.weights_image is None or args.weights_maps is None:
            raise UsageError("deep-jsense mode needs --weights-image and --weights-maps")
    if args.weights_image is not None:
        d_image = ResNetDenoiser.from_file(args.weights_image)
    elif args.mode == "modl":
        d_image = gaussian_denoiser(args.gaussian_sigma)
    if args.weights_maps is not None:
        d_maps = ResNetDenoiser.from_file(args.weights_maps)

    y = read_mck(args.kspace)
    mask = read_mask(args.mask)
    if y.shape[1:] != mask.shape:
        raise UsageError(f"k-space grid {y.shape[1:]} does not match mask {mask.shape}")
    for name, d, io in (("image", d_image, 2), ("maps", d_maps, 2 * y.shape[0])):
        if isinstance(d, ResNetDenoiser) and d.weights.channels_io != io:
            raise UsageError(f"{name} weights expect {d.weights.channels_io} channels, need {io}")

    image, state = reconstruct(y, mask, cfg, d_maps=d_maps, d_image=d_image)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _save_image(image, out / "recon.pgm")
    with open(out / "objective.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["outer", "data_term", "penalty", "objective"])
        for i, (d, p) in enumerate(zip(state.objective_history, state.penalty_history)):
            w.writerow([i, repr(d), repr(p), repr(d + p)])
    params = cfg.as_dict()
    params.update(kspace=args.kspace, mask=args.mask,
                  weights_image=args.weights_image or "", weights_maps=args.weights_maps or "")
    _write_manifest(out / "config.txt", params)


def cmd_evaluate(args):
    recon = _load_image(args.recon)
    truth = _load_image(args.truth)
    if recon.shape != truth.shape:
        raise UsageError(f"recon {recon.shape} and truth {truth.shape} differ in shape")
    crop = ""
    if args.crop is not None:
        ch, cw = args.crop
        try:
            recon, truth = center_crop(recon, ch, cw), center_crop(truth, ch, cw)
        except ValueError as e:
            raise UsageError(str(e)) from e
        crop = f"{ch}x{cw}"
    row = [f"{ssim(recon, truth):.6f}", f"{nmse(recon, truth):.6e}", args.recon, args.truth, crop]
    header = ["ssim", "nmse", "recon", "truth", "crop"]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    w.writerow(row)
    if args.csv:
        path = Path(args.csv)
        new = not path.exists() or path.stat().st_size == 0
        with open(path, "a", newline="") as f:
            fw = csv.writer(f, lineterminator="\n")
            if new:
                fw.writerow(header)
            fw.writerow(row)


def cmd_sweep(args):
    values = _values(args.values)
    if not values:
        raise UsageError("--values must list at least one value")
    cfg = ReconConfig(
        outer_iters=args.outer, cg_iters_maps=args.cg_maps, cg_iters_image=args.cg_image,
        lambda_m=args.lam, lambda_s=args.lam, map_kernel=args.kernel, mode="jsense",
    )
    setup = SweepSetup(height=args.h, width=args.w, coils=args.coils, sigma=args.sigma,
                       accel=args.accel, acs=args.acs, kind=args.kind, config=cfg)
    try:
        rows = run_sweep(args.axis, values, setup, repeats=args.repeats, seed=args.seed,
                         acs_ref_width=args.acs_ref_width)
    except ValueError as e:
        raise UsageError(str(e)) from e

    def emit(f):
        w = csv.DictWriter(f, fieldnames=CSV_HEADER, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})

    if args.out:
        with open(args.out, "w", newline="") as f:
            emit(f)
        params = cfg.as_dict()
        params.update(axis=args.axis, values=" ".join(map(repr, values)), repeats=args.repeats,
                      seed=args.seed, h=args.h, w=args.w, coils=args.coils, sigma=args.sigma,
                      accel=args.accel, acs=args.acs, mask_kind=args.kind,
                      acs_ref_width=args.acs_ref_width or "")
        _write_manifest(f"{args.out}.manifest.txt", params)
    else:
        emit(sys.stdout)


def build_parser():
    p = argparse.ArgumentParser(prog="jointrecon", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="simulate fully sampled phantom k-space")
    s.add_argument("--h", type=int, default=64)
    s.add_argument("--w", type=int, default=64)
    s.add_argument("--coils", type=int, default=8)
    s.add_argument("--sigma", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("mask", help="write a column undersampling mask")
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--accel", type=float, required=True)
    s.add_argument("--acs", type=int, default=0)
    s.add_argument("--kind", choices=("random", "equispaced"), default="random")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_mask)

    s = sub.add_parser("reconstruct", help="joint image and map reconstruction")
    s.add_argument("--kspace", required=True)
    s.add_argument("--mask", required=True)
    s.add_argument("--mode", choices=MODES, default="jsense")
    s.add_argument("--outer", type=int, default=6)
    s.add_argument("--cg-maps", type=int, default=None)
    s.add_argument("--cg-image", type=int, default=6)
    s.add_argument("--lambda-s", type=float, default=1e-2)
    s.add_argument("--lambda-m", type=float, default=1e-2)
    s.add_argument("--kernel", type=_dims, default=(15, 9), help="map kernel, e.g. 15x9")
    s.add_argument("--epsilon-rss", type=float, default=1e-6)
    s.add_argument("--weights-image")
    s.add_argument("--weights-maps")
    s.add_argument("--gaussian-sigma", type=float, default=1.0,
                   help="image prior for modl mode without --weights-image")
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("evaluate", help="SSIM and NMSE of a reconstruction")
    s.add_argument("--recon", required=True)
    s.add_argument("--truth", required=True)
    s.add_argument("--crop", type=_dims)
    s.add_argument("--csv", help="append the row to this CSV file")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("sweep", help="acceleration or ACS robustness sweep")
    s.add_argument("--axis", choices=("accel", "acs"), required=True)
    s.add_argument("--values", nargs="*", default=[], help="numbers or start:stop:step")
    s.add_argument("--repeats", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--h", type=int, default=64)
    s.add_argument("--w", type=int, default=64)
    s.add_argument("--coils", type=int, default=8)
    s.add_argument("--sigma", type=float, default=0.01)
    s.add_argument("--accel", type=float, default=4.0, help="fixed R for the acs axis")
    s.add_argument("--acs", type=int, default=8, help="fixed ACS width for the accel axis")
    s.add_argument("--acs-ref-width", type=int, help="rescale ACS values from this width")
    s.add_argument("--kind", choices=("random", "equispaced"), default="random")
    s.add_argument("--outer", type=int, default=6)
    s.add_argument("--cg-maps", type=int, default=6)
    s.add_argument("--cg-image", type=int, default=6)
    s.add_argument("--lam", type=float, default=1e-2)
    s.add_argument("--kernel", type=_dims, default=(9, 5))
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except CgBreakdown as e:
        print(f"jointrecon: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (FormatError, OSError) as e:
        print(f"jointrecon: {e}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
