"""Joint image and coil-sensitivity reconstruction for parallel MRI.

The image and the coil sensitivity maps are both unknown kernels in
k-space, tied by the bilinear model ``k_i = s_i * m``. Reconstruction
alternates conjugate-gradient refits of each kernel with optional
denoiser priors, for a fixed number of unrolled iterations.
"""
__version__ = "0.1.0"

from .cg import CgBreakdown, CgReport, cg_solve
from .core import MODES, ReconConfig, SamplingMask
from .denoise import (
    ResNetDenoiser,
    ResNetWeights,
    denoise_gaussian,
    denoise_identity,
    denoise_zero,
    gaussian_denoiser,
    read_weights,
    resnet_apply,
    wrap_kspace,
    write_weights,
)
from .fourier import crop_center, fft2c, ifft2c, kspace_linear_conv, kspace_linear_corr, pad_center
from .io import read_mask, read_mck, write_mask, write_mck
from .metrics import nmse, ssim, ssim_loss
from .operators import (
    adjoint_m,
    adjoint_s,
    apply_mask,
    forward_full,
    forward_m,
    forward_s,
    normal_m,
    normal_s,
)
from .pipeline import (
    ReconState,
    final_image,
    objective,
    reconstruct,
    regularized_objective,
    rss_init,
    update_image,
    update_maps,
    zero_filled_rss,
)
from .simulate import CoilSpec, PhantomSpec, make_coil_maps, make_mask, make_phantom, shepp_logan, synthesize_kspace
