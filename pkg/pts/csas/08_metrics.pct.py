# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp metrics

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Metrics
#
# PSNR and SSIM of deconvolved magnitudes against ground truth. Complex
# fields are reduced to `|σ̃|`, scaled to [0, 1] by their maximum and compared
# inside a centered circular mask.

# %%
#|export
import math
from dataclasses import dataclass

import numpy as np
from skimage.metrics import structural_similarity

# %%
#|export
CSV_COLUMNS = ("scene", "method", "noise_psnr_db", "psnr_db", "ssim")

@dataclass(frozen=True)
class MetricReport:
    psnr_db: float
    ssim: float
    method: str
    scene: str
    mask_radius: float
    noise_psnr_db: float = math.inf

    def as_row(self) -> dict[str, object]:
        return {
            "scene": self.scene,
            "method": self.method,
            "noise_psnr_db": self.noise_psnr_db,
            "psnr_db": self.psnr_db,
            "ssim": self.ssim,
        }

# %% [markdown]
# ## Masking and scaling

# %%
#|export
def circular_mask(n: int, radius: float | None = None) -> np.ndarray:
    """Boolean disk centered on the grid; radius defaults to n/2 pixels."""
    r = n / 2 if radius is None else radius
    if r < 0:
        raise ValueError(f"Invalid mask radius {r}: must be >= 0")
    idx = np.arange(n) - (n - 1) / 2
    return idx[None, :] ** 2 + idx[:, None] ** 2 <= r**2

def normalize_magnitude(data: np.ndarray) -> np.ndarray:
    """|x| / max|x|, or zeros for an all-zero input."""
    mag = np.abs(data).astype(float)
    peak = mag.max()
    return mag / peak if peak > 0 else mag

# %% [markdown]
# ## PSNR

# %%
#|exporti
def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"Shape mismatch: {a.shape} vs {b.shape}")

def _psnr(a: np.ndarray, b: np.ndarray, region: str) -> float:
    if a.size == 0:
        raise ValueError(f"No pixels in {region}")
    mse = float(np.mean((np.asarray(a, float) - np.asarray(b, float)) ** 2))
    return math.inf if mse == 0 else 10 * math.log10(1.0 / mse)

# %%
#|export
def image_psnr(a: np.ndarray, b: np.ndarray, mask_radius: float | None = None) -> float:
    """10·log10(1/MSE) over the masked pixels; ``inf`` for identical images."""
    _check_pair(a, b)
    mask = circular_mask(a.shape[0], mask_radius)
    return _psnr(np.asarray(a)[mask], np.asarray(b)[mask], f"the mask of radius {mask_radius}")

# %% [markdown]
# ## SSIM
#
# Gaussian-weighted SSIM (11×11 window, σ = 1.5, K1 = 0.01, K2 = 0.03, L = 1).
# The local SSIM map is averaged over the mask minus the border where the
# window would run off the image.

# %%
#|export
SSIM_WINDOW = 11

def image_ssim(a: np.ndarray, b: np.ndarray, mask_radius: float | None = None) -> float:
    _check_pair(a, b)
    n = a.shape[0]
    if min(a.shape) < SSIM_WINDOW:
        raise ValueError(f"Images must be at least {SSIM_WINDOW}×{SSIM_WINDOW} for SSIM, got {a.shape}")
    _, smap = structural_similarity(
        np.asarray(a, float), np.asarray(b, float),
        data_range=1.0, gaussian_weights=True, sigma=1.5,
        use_sample_covariance=False, K1=0.01, K2=0.03, full=True,
    )
    pad = (SSIM_WINDOW - 1) // 2
    valid = np.zeros(a.shape, dtype=bool)
    valid[pad:n - pad, pad:a.shape[1] - pad] = True
    region = valid & circular_mask(n, mask_radius)
    if not region.any():
        raise ValueError(f"No pixels in the mask of radius {mask_radius} after removing the SSIM border")
    return float(smap[region].mean())

# %% [markdown]
# ## Reports

# %%
#|export
def evaluate_field(
    estimate: np.ndarray,
    truth: np.ndarray,
    method: str,
    scene: str,
    mask_radius: float | None = None,
    noise_psnr_db: float = math.inf,
) -> MetricReport:
    """Compare a (complex) estimate with ground-truth magnitudes."""
    a = normalize_magnitude(estimate)
    b = normalize_magnitude(truth)
    radius = a.shape[0] / 2 if mask_radius is None else mask_radius
    return MetricReport(
        psnr_db=image_psnr(a, b, radius),
        ssim=image_ssim(a, b, radius),
        method=method,
        scene=scene,
        mask_radius=radius,
        noise_psnr_db=noise_psnr_db,
    )

# %% [markdown]
# ## Quadrants
#
# Row 0 is the top of the image.

# %%
#|export
QUADRANTS = ("top-left", "top-right", "bottom-left", "bottom-right")

def quadrant_slices(n: int) -> dict[str, tuple[slice, slice]]:
    h = n // 2
    return {
        "top-left": (slice(0, h), slice(0, h)),
        "top-right": (slice(0, h), slice(h, n)),
        "bottom-left": (slice(h, n), slice(0, h)),
        "bottom-right": (slice(h, n), slice(h, n)),
    }

def quadrant_psnr(estimate: np.ndarray, truth: np.ndarray) -> dict[str, float]:
    """PSNR of the normalized magnitudes within each quadrant (no circular mask)."""
    _check_pair(estimate, truth)
    if estimate.ndim != 2 or min(estimate.shape) < 2:
        raise ValueError(f"Quadrants need a 2-D image of at least 2×2, got shape {estimate.shape}")
    a, b = normalize_magnitude(estimate), normalize_magnitude(truth)
    return {
        name: _psnr(a[rs, cs], b[rs, cs], f"quadrant {name}")
        for name, (rs, cs) in quadrant_slices(a.shape[0]).items()
    }
