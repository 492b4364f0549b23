# %% [markdown]
# # Simulated acquisitions and the k-space operators
#
# A phantom, a set of coil profiles, and undersampled multicoil k-space.
# Then the two linear operators of the bilinear model, with a dot-product
# check of their adjoints.

# %%
import numpy as np

from jointrecon import (
    CoilSpec, adjoint_m, adjoint_s, fft2c, forward_full, forward_m, forward_s,
    make_coil_maps, make_mask, make_phantom, shepp_logan, synthesize_kspace,
)
from jointrecon.fourier import crop_center

truth = make_phantom(shepp_logan(64, 64))
maps = make_coil_maps(CoilSpec(coils=8), 64, 64)
k = synthesize_kspace(truth, maps, noise_sigma=0.01, seed=0)
print("k-space", k.shape, k.dtype)
print("RSS of the maps, min/max:", np.sqrt((abs(maps) ** 2).sum(0)).min(), np.sqrt((abs(maps) ** 2).sum(0)).max())

# %%
mask = make_mask(64, 64, accel=4, acs_width=8, kind="random", seed=1)
print(f"{mask.num_sampled} of {mask.width} columns sampled, R = {mask.acceleration:.2f}")
print("".join("|" if c else "." for c in mask.columns))

# %% [markdown]
# Smooth coil profiles concentrate their k-space energy near the center, so
# each coil's data is roughly a small kernel convolved with the image
# spectrum. What is left over is noise plus leakage from the profiles not
# being periodic across the field of view.

# %%
s = crop_center(fft2c(maps), 15, 9) / 64
m = fft2c(truth)
model = forward_full(s, m)
print("relative model error with 15x9 kernels:", np.linalg.norm(model - k) / np.linalg.norm(k))

# %% [markdown]
# Adjoint check: `<y, A x> == <A^H y, x>` for both operators.

# %%
rng = np.random.default_rng(0)
y = rng.standard_normal(k.shape) + 1j * rng.standard_normal(k.shape)
x = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
print(np.vdot(y, forward_m(s, mask, x)), np.vdot(adjoint_m(s, mask, y), x))
print(np.vdot(y, forward_s(m, mask, s)), np.vdot(adjoint_s(m, mask, y, (15, 9)), s))
