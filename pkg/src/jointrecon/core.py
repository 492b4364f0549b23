"""Array conventions, sampling masks and reconstruction settings.

Complex data are carried as plain numpy arrays:

* a grid (image or k-space slice) is ``(H, W)`` complex,
* multicoil k-space is ``(C, H, W)`` complex,
* the image kernel ``m`` is ``(H, W)`` complex k-space,
* the map kernel set ``s`` is ``(C, kh, kw)`` complex k-space with odd
  ``kh`` and ``kw``.

Index ``(H // 2, W // 2)`` is the center (DC) sample of every grid.
"""
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MODES",
    "SamplingMask",
    "ReconConfig",
    "as_complex",
    "check_finite",
    "check_kernel_shape",
]

MODES = ("jsense", "modl", "deep-jsense")


def as_complex(x, ndim=None, name="array"):
    """Return ``x`` as a complex128 array, checking its rank."""
    x = np.asarray(x)
    if ndim is not None and x.ndim != ndim:
        raise ValueError(f"{name} must have {ndim} dimensions, got shape {x.shape}")
    return x.astype(np.complex128, copy=False)


def check_finite(x, name="array"):
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


def check_kernel_shape(kh, kw, height=None, width=None):
    if kh < 1 or kw < 1 or kh % 2 == 0 or kw % 2 == 0:
        raise ValueError(f"kernel dimensions must be odd and positive, got {kh}x{kw}")
    if height is not None and (kh > height or kw > width):
        raise ValueError(
            f"kernel {kh}x{kw} is larger than the {height}x{width} grid"
        )


@dataclass(frozen=True, eq=False)
class SamplingMask:
    """Phase-encode (column) undersampling pattern.

    Args:
        height (int): number of readout rows ``H``.
        columns (array): ``W`` booleans, True where the column is acquired.
        acs_width (int): width of the fully sampled block centered at ``W // 2``.
    """

    height: int
    columns: np.ndarray
    acs_width: int = 0

    def __post_init__(self):
        cols = np.asarray(self.columns)
        if cols.ndim != 1:
            raise ValueError("mask columns must be one-dimensional")
        if cols.dtype != bool:
            if not np.all((cols == 0) | (cols == 1)):
                raise ValueError("mask columns must be 0/1")
            cols = cols.astype(bool)
        cols = cols.copy()
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

        if self.height < 1:
            raise ValueError("mask height must be positive")
        if not cols.any():
            raise ValueError("mask must sample at least one column")
        if not 0 <= self.acs_width <= cols.size:
            raise ValueError("acs_width must lie in [0, W]")
        if self.acs_width and not cols[self.acs_slice].all():
            raise ValueError("ACS columns must all be sampled")

    @property
    def width(self):
        return self.columns.size

    @property
    def shape(self):
        return (self.height, self.width)

    @property
    def acs_slice(self):
        start = self.width // 2 - self.acs_width // 2
        return slice(start, start + self.acs_width)

    @property
    def num_sampled(self):
        return int(self.columns.sum())

    @property
    def acceleration(self):
        return self.width / self.num_sampled

    def to_array(self):
        """Full ``(H, W)`` boolean mask."""
        return np.broadcast_to(self.columns, self.shape).copy()

    def apply(self, data):
        """Zero every unsampled column of ``data`` (last axis is ``W``)."""
        data = np.asarray(data)
        if data.shape[-2:] != self.shape:
            raise ValueError(f"data shape {data.shape} does not match mask {self.shape}")
        return np.where(self.columns, data, 0)

    def __eq__(self, other):
        if not isinstance(other, SamplingMask):
            return NotImplemented
        return (
            self.height == other.height
            and self.acs_width == other.acs_width
            and np.array_equal(self.columns, other.columns)
        )

    @classmethod
    def full(cls, height, width):
        return cls(height, np.ones(width, dtype=bool), acs_width=width)


@dataclass(frozen=True)
class ReconConfig:
    """Hyperparameters of the unrolled alternating reconstruction.

    ``mode`` selects one of the reductions of the joint model:

    * ``"jsense"``: no learned priors, both denoisers are zero and the
      assignment steps are skipped (L2-regularized joint estimation).
    * ``"modl"``: maps are frozen at their initial estimate
      (``cg_iters_maps`` must be 0), only the image is refined.
    * ``"deep-jsense"``: both variables are refined with a denoiser each.

    ``epsilon_rss`` is relative: the RSS ratio used for the initial maps
    divides by ``rss + epsilon_rss * max(rss)``.
    """

    outer_iters: int = 6
    cg_iters_maps: int = 6
    cg_iters_image: int = 6
    lambda_m: float = 1e-2
    lambda_s: float = 1e-2
    map_kernel: tuple = field(default=(15, 9))
    mode: str = "jsense"
    epsilon_rss: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "map_kernel", tuple(int(k) for k in self.map_kernel))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.outer_iters < 1:
            raise ValueError("outer_iters must be >= 1")
        if self.cg_iters_maps < 0:
            raise ValueError("cg_iters_maps must be >= 0")
        if self.cg_iters_image < 1:
            raise ValueError("cg_iters_image must be >= 1")
        if self.lambda_m < 0 or self.lambda_s < 0:
            raise ValueError("lambda_m and lambda_s must be nonnegative")
        if not self.epsilon_rss > 0:
            raise ValueError("epsilon_rss must be positive")
        if len(self.map_kernel) != 2:
            raise ValueError("map_kernel must be a (kh, kw) pair")
        check_kernel_shape(*self.map_kernel)
        if self.mode == "modl" and self.cg_iters_maps != 0:
            raise ValueError("modl mode freezes the maps: cg_iters_maps must be 0")

    @classmethod
    def for_mode(cls, mode, **kwargs):
        """Config with ``mode`` and its forced settings (``n1 = 0`` for modl)."""
        if mode == "modl":
            kwargs.setdefault("cg_iters_maps", 0)
        return cls(mode=mode, **kwargs)

    def as_dict(self):
        kh, kw = self.map_kernel
        return {
            "mode": self.mode,
            "outer_iters": self.outer_iters,
            "cg_iters_maps": self.cg_iters_maps,
            "cg_iters_image": self.cg_iters_image,
            "lambda_m": self.lambda_m,
            "lambda_s": self.lambda_s,
            "map_kernel": f"{kh}x{kw}",
            "epsilon_rss": self.epsilon_rss,
        }
