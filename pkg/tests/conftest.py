import numpy as np
import pytest

from jointrecon.core import SamplingMask
from jointrecon.simulate import CoilSpec, make_coil_maps, make_mask, make_phantom, shepp_logan, synthesize_kspace

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def phantom64():
    """64x64, 8 coils, sigma 0.01, R=2 with 16 ACS columns."""
    truth = make_phantom(shepp_logan(64, 64))
    maps = make_coil_maps(CoilSpec(8), 64, 64)
    k = synthesize_kspace(truth, maps, 0.01, seed=7)
    mask = make_mask(64, 64, 2, 16, kind="random", seed=3)
    return truth.real, maps, k, mask


@pytest.fixture
def full_mask():
    return SamplingMask.full


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
