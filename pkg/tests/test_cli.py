import csv
import io
from contextlib import redirect_stdout

import numpy as np
import pytest

from jointrecon.cli import main
from jointrecon.denoise import random_weights, write_weights
from jointrecon.io import read_mask, read_mck, read_pgm


def run(*argv):
    return main([str(a) for a in argv])


def run_capture(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(*argv)
    return code, buf.getvalue()


def usage_exit(*argv):
    with pytest.raises(SystemExit) as e:
        run(*argv)
    return e.value.code


@pytest.fixture(scope="module")
def sim(tmp_path_factory):
    d = tmp_path_factory.mktemp("sim")
    assert run("simulate", "--h", 32, "--w", 32, "--coils", 4, "--sigma", 0.01, "--seed", 1, "--out-dir", d) == 0
    assert run("mask", "--h", 32, "--w", 32, "--accel", 2, "--acs", 8, "--seed", 2, "--out", d / "mask.msk") == 0
    return d


def test_simulate_writes_contract_files(tmp_path):
    assert run("simulate", "--h", 64, "--w", 64, "--coils", 8, "--sigma", 0, "--seed", 1, "--out-dir", tmp_path) == 0
    assert read_mck(tmp_path / "kspace.mck").shape == (8, 64, 64)
    assert (tmp_path / "truth.pgm").exists()
    manifest = dict(line.split("=", 1) for line in (tmp_path / "manifest.txt").read_text().splitlines())
    assert manifest["coils"] == "8" and manifest["seed"] == "1" and manifest["sigma"] == "0.0"


def test_simulate_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        run("simulate", "--h", 16, "--w", 12, "--coils", 3, "--sigma", 0.1, "--seed", 5, "--out-dir", tmp_path / name)
    for f in ("kspace.mck", "truth.pgm", "truth.pgm.scale", "manifest.txt"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_simulate_rejects_zero_coils(tmp_path):
    assert usage_exit("simulate", "--coils", 0, "--out-dir", tmp_path) == 2


def test_mask_command(tmp_path):
    run("mask", "--h", 8, "--w", 20, "--accel", 4, "--acs", 2, "--kind", "equispaced", "--out", tmp_path / "m")
    m = read_mask(tmp_path / "m")
    assert m.shape == (8, 20) and m.num_sampled == 5
    assert usage_exit("mask", "--h", 8, "--w", 20, "--accel", 4, "--acs", 9, "--out", tmp_path / "m") == 2


def test_reconstruct_jsense_monotone_objective(sim, tmp_path):
    out = tmp_path / "r"
    code = run("reconstruct", "--kspace", sim / "kspace.mck", "--mask", sim / "mask.msk",
               "--mode", "jsense", "--kernel", "7x5", "--out", out)
    assert code == 0
    with open(out / "objective.csv") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 7
    obj = np.array([float(r["objective"]) for r in rows])
    assert np.all(np.diff(obj) <= 1e-8 * obj[0])
    img = read_pgm(out / "recon.pgm", float((out / "recon.pgm.scale").read_text()))
    assert img.shape == (32, 32) and img.max() > 0
    assert "mode=jsense" in (out / "config.txt").read_text()


def test_reconstruct_modl_rejects_map_iterations(sim, tmp_path):
    assert usage_exit("reconstruct", "--kspace", sim / "kspace.mck", "--mask", sim / "mask.msk",
                      "--mode", "modl", "--cg-maps", 5, "--out", tmp_path) == 2


def test_reconstruct_modl_defaults(sim, tmp_path):
    code = run("reconstruct", "--kspace", sim / "kspace.mck", "--mask", sim / "mask.msk",
               "--mode", "modl", "--outer", 2, "--kernel", "7x5", "--out", tmp_path)
    assert code == 0
    assert "cg_iters_maps=0" in (tmp_path / "config.txt").read_text()


def test_reconstruct_deep_jsense_needs_weights(sim, tmp_path):
    assert usage_exit("reconstruct", "--kspace", sim / "kspace.mck", "--mask", sim / "mask.msk",
                      "--mode", "deep-jsense", "--out", tmp_path) == 2


def test_reconstruct_deep_jsense_with_weights(sim, tmp_path):
    write_weights(random_weights(1, 2, 4, scale=0.01, seed=0), tmp_path / "img.djw")
    write_weights(random_weights(1, 8, 4, scale=0.01, seed=1), tmp_path / "maps.djw")
    code = run("reconstruct", "--kspace", sim / "kspace.mck", "--mask", sim / "mask.msk",
               "--mode", "deep-jsense", "--outer", 1, "--cg-maps", 2, "--cg-image", 2, "--kernel", "5x5",
               "--weights-image", tmp_path / "img.djw", "--weights-maps", tmp_path / "maps.djw",
               "--out", tmp_path / "r")
    assert code == 0
    # channel count of the map network must match 2C
    assert usage_exit("reconstruct", "--kspace", sim / "kspace.mck", "--mask", sim / "mask.msk",
                      "--mode", "deep-jsense", "--weights-image", tmp_path / "img.djw",
                      "--weights-maps", tmp_path / "img.djw", "--out", tmp_path / "r") == 2


def test_reconstruct_mask_grid_mismatch(sim, tmp_path):
    run("mask", "--h", 16, "--w", 16, "--accel", 2, "--out", tmp_path / "m")
    assert usage_exit("reconstruct", "--kspace", sim / "kspace.mck", "--mask", tmp_path / "m",
                      "--out", tmp_path / "r") == 2


def test_reconstruct_bad_file_exit_code(sim, tmp_path):
    (tmp_path / "junk.mck").write_bytes(b"nope")
    assert run("reconstruct", "--kspace", tmp_path / "junk.mck", "--mask", sim / "mask.msk",
               "--out", tmp_path / "r") == 2


def _parse(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 1
    return rows[0]


def test_evaluate_identities(sim, tmp_path):
    truth = sim / "truth.pgm"
    code, out = run_capture("evaluate", "--recon", truth, "--truth", truth)
    row = _parse(out)
    assert code == 0 and float(row["ssim"]) == 1.0 and float(row["nmse"]) == 0.0

    from jointrecon.cli import _save_image

    _save_image(np.zeros((32, 32)), tmp_path / "zero.pgm")
    _, out = run_capture("evaluate", "--recon", tmp_path / "zero.pgm", "--truth", truth)
    assert float(_parse(out)["nmse"]) == 1.0


def test_evaluate_crop_matches_manual_precrop(sim, tmp_path):
    from jointrecon.cli import _load_image, _save_image
    from jointrecon.metrics import center_crop, nmse, ssim

    truth = _load_image(sim / "truth.pgm")
    noisy = truth + 0.05 * np.random.default_rng(0).random(truth.shape)
    _save_image(noisy, tmp_path / "n.pgm")
    noisy = _load_image(tmp_path / "n.pgm")
    _, out = run_capture("evaluate", "--recon", tmp_path / "n.pgm", "--truth", sim / "truth.pgm",
                         "--crop", "20x16", "--csv", tmp_path / "m.csv")
    row = _parse(out)
    a, b = center_crop(noisy, 20, 16), center_crop(truth, 20, 16)
    assert float(row["ssim"]) == pytest.approx(ssim(a, b), abs=1e-6)
    assert float(row["nmse"]) == pytest.approx(nmse(a, b), rel=1e-5)
    assert row["crop"] == "20x16"
    _, full = run_capture("evaluate", "--recon", tmp_path / "n.pgm", "--truth", sim / "truth.pgm")
    assert _parse(full)["ssim"] != row["ssim"]
    run_capture("evaluate", "--recon", tmp_path / "n.pgm", "--truth", sim / "truth.pgm", "--csv", tmp_path / "m.csv")
    assert len((tmp_path / "m.csv").read_text().splitlines()) == 3


def test_sweep_acs_row_count(tmp_path):
    out = tmp_path / "acs.csv"
    code = run("sweep", "--axis", "acs", "--values", 1, 6, 12, 26, 56, "--acs-ref-width", 372,
               "--repeats", 2, "--h", 24, "--w", 24, "--coils", 2, "--outer", 1, "--cg-maps", 1,
               "--cg-image", 1, "--kernel", "5x3", "--accel", 2, "--out", out)
    assert code == 0
    with open(out) as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 5 * 2 + 5
    assert sum(r["kind"] == "summary" for r in rows) == 5
    assert (tmp_path / "acs.csv.manifest.txt").exists()


def test_sweep_range_values_and_determinism(tmp_path):
    args = ["sweep", "--axis", "accel", "--values", "2:3:0.5", "--h", 16, "--w", 16, "--coils", 2,
            "--acs", 2, "--outer", 1, "--cg-maps", 1, "--cg-image", 1, "--kernel", "3x3"]
    run(*args, "--out", tmp_path / "a.csv")
    run(*args, "--out", tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    rows = list(csv.DictReader(open(tmp_path / "a.csv")))
    assert [float(r["value"]) for r in rows if r["kind"] == "run"] == [2.0, 2.5, 3.0]


def test_sweep_empty_values(tmp_path):
    assert usage_exit("sweep", "--axis", "acs", "--values") == 2
