# %% [markdown]
# # Scale ambiguity and the inner solver
#
# `s * m` does not change when the maps are scaled by a complex `alpha` and
# the image by `1 / alpha`. Without regularization the whole reconstruction
# inherits this invariance.

# %%
from dataclasses import replace

import numpy as np

from jointrecon import (
    CoilSpec, ReconConfig, cg_solve, make_coil_maps, make_mask, make_phantom,
    reconstruct, rss_init, shepp_logan, synthesize_kspace,
)

truth = make_phantom(shepp_logan(48, 48))
k = synthesize_kspace(truth, make_coil_maps(CoilSpec(6), 48, 48), 0.01, seed=2)
mask = make_mask(48, 48, 2, 12, seed=4)
cfg = ReconConfig(lambda_m=0, lambda_s=0, map_kernel=(9, 5))

init = rss_init(k, mask, cfg)
alpha = 2 * np.exp(1j * np.pi / 3)
a, _ = reconstruct(k, mask, cfg, init=init)
b, sb = reconstruct(k, mask, cfg, init=replace(init, s=alpha * init.s, m=init.m / alpha))
print("relative image difference:", np.linalg.norm(a - b) / np.linalg.norm(a))
print("map kernel norm ratio:", np.linalg.norm(sb.s) / np.linalg.norm(init.s))

# %% [markdown]
# The solver runs a fixed number of steps from a warm start. On a small
# Hermitian positive definite system it reaches the direct solution within
# `d` steps.

# %%
rng = np.random.default_rng(0)
d = 20
m = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
A = m.conj().T @ m + np.eye(d)
rhs = rng.standard_normal(d) + 0j
x, report = cg_solve(lambda v: A @ v, rhs, np.zeros(d, complex), d)
print("iterations:", report.iterations_run)
print("error vs solve:", np.linalg.norm(x - np.linalg.solve(A, rhs)) / np.linalg.norm(x))
print("residuals:", " ".join(f"{r:.1e}" for r in report.residual_history[::4]))
