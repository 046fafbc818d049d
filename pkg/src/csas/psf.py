# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/05_psf.pct.py

__all__ = ['AnalyticPsfParams', 'Psf', 'center_position', 'centered_psf_spectrum', 'clear_psf_cache', 'crop_psf', 'fit_centered_psf_params', 'general_psf_phase', 'general_psf_spectrum', 'imag_energy_fraction', 'imag_real_ratio', 'main_lobe_width', 'normalize_psf', 'psf_cache_info', 'psf_kernel', 'psf_spectrum', 'radial_profile', 'simulate_offcenter_psf', 'simulate_psf', 'spectral_coords', 'translate_psf']

# %% pts/csas/05_psf.pct.py 3
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import fft as sfft
from scipy.optimize import curve_fit

from .beamformer import ComplexImage, das, pulse_compress
from .geometry import SceneGrid, TransducerRing
from .signal import Waveform
from .simulator import synthesize

# %% pts/csas/05_psf.pct.py 5
@dataclass(frozen=True)
class Psf:
    image: ComplexImage
    f_start: float
    f_stop: float
    center: tuple[int, int]     # (row, col) of the scatterer pixel

    @property
    def grid(self) -> SceneGrid:
        return self.image.grid

# %% pts/csas/05_psf.pct.py 6
@dataclass(frozen=True)
class AnalyticPsfParams:
    """Free parameters of the centered PSF spectrum model."""
    a0: float
    sigma_w: float
    k: float

    def __post_init__(self):
        if not self.a0 > 0:
            raise ValueError(f"Invalid a0 {self.a0}: must be > 0")
        if not self.k > 0:
            raise ValueError(f"Invalid k {self.k}: must be > 0")

# %% pts/csas/05_psf.pct.py 8
PSF_CACHE_SIZE = 64

@dataclass(frozen=True)
class _PsfRequest:
    key: tuple
    ring: TransducerRing = field(compare=False)
    grid: SceneGrid = field(compare=False)
    w: Waveform = field(compare=False)
    c: float = field(compare=False)
    position: tuple[float, float, float] = field(compare=False)
    oversample: int = field(compare=False)
    workers: int = field(compare=False)

@lru_cache(maxsize=PSF_CACHE_SIZE)
def _simulate_cached(req: _PsfRequest) -> Psf:
    x, y, z = req.position
    pings = synthesize(np.array([[x, y, z]]), np.array([1.0 + 0j]), req.ring, req.grid, req.w, req.c)
    img = das(pulse_compress(pings, req.w, req.oversample), req.grid, req.c, workers=req.workers)
    return Psf(image=img, f_start=req.w.f_start, f_stop=req.w.f_stop, center=req.grid.pixel_of(x, y))

# %% pts/csas/05_psf.pct.py 9
def clear_psf_cache() -> None:
    _simulate_cached.cache_clear()

def psf_cache_info():
    """Hits, misses and size of the PSF cache."""
    return _simulate_cached.cache_info()

def center_position(grid: SceneGrid) -> tuple[float, float, float]:
    """Physical position of pixel (n//2, n//2) on the imaging plane."""
    c = grid.coords[grid.n // 2]
    return (float(c), float(c), grid.z0)

# %% pts/csas/05_psf.pct.py 10
def simulate_offcenter_psf(
    ring: TransducerRing,
    grid: SceneGrid,
    w: Waveform,
    c: float,
    position: tuple[float, float, float],
    oversample: int = 8,
    workers: int = 1,
) -> Psf:
    """DAS image of a unit scatterer at *position* (x, y, z), noiseless."""
    x, y, z = (float(v) for v in position)
    if np.hypot(x, y) >= ring.radius:
        raise ValueError(f"Position ({x}, {y}) is outside the ring interior (radius {ring.radius})")
    half = grid.extent / 2
    if abs(x) > half or abs(y) > half:
        raise ValueError(f"Position ({x}, {y}) is outside the grid extent ±{half}")
    key = (ring.key(), grid, (w.f_start, w.f_stop, w.duration, w.fs), float(c), (x, y, z), oversample)
    return _simulate_cached(_PsfRequest(key, ring, grid, w, float(c), (x, y, z), oversample, workers))

# %% pts/csas/05_psf.pct.py 11
def simulate_psf(
    ring: TransducerRing, grid: SceneGrid, w: Waveform, c: float, oversample: int = 8, workers: int = 1,
) -> Psf:
    """PSF of a unit scatterer on the center pixel of *grid*."""
    return simulate_offcenter_psf(ring, grid, w, c, center_position(grid), oversample, workers)

# %% pts/csas/05_psf.pct.py 13
def normalize_psf(psf: Psf) -> Psf:
    """Scale the PSF so that max|Re| is one."""
    peak = np.abs(psf.image.data.real).max()
    if peak == 0:
        raise ValueError("PSF has no real component to normalize by")
    return replace(psf, image=ComplexImage(psf.image.data / peak, psf.grid))

def imag_real_ratio(psf: Psf) -> float:
    """max|Im| / max|Re| of the PSF image."""
    d = psf.image.data
    return float(np.abs(d.imag).max() / np.abs(d.real).max())

def imag_energy_fraction(psf: Psf) -> float:
    """Σ|Im|² / Σ|I|² over the PSF image."""
    d = psf.image.data
    total = float(np.sum(np.abs(d) ** 2))
    if total == 0:
        raise ValueError("PSF image is all zero")
    return float(np.sum(d.imag**2)) / total

def crop_psf(psf: Psf, radius: int) -> np.ndarray:
    """Square window of half-width *radius* around the PSF center, for display."""
    i, j = psf.center
    n = psf.grid.n
    return psf.image.data[max(0, i - radius): min(n, i + radius + 1), max(0, j - radius): min(n, j + radius + 1)]

# %% pts/csas/05_psf.pct.py 15
def main_lobe_width(psf: Psf, level_db: float = -6.0) -> float:
    mag = np.abs(psf.image.data)
    i, j = np.unravel_index(np.argmax(mag), mag.shape)
    cut = mag[i] / mag[i, j]
    level = 10 ** (level_db / 20)

    def crossing(step: int) -> float:
        k = j
        while 0 <= k + step < cut.size and cut[k + step] >= level:
            k += step
        if not 0 <= k + step < cut.size:
            return float(k)
        a, b = cut[k], cut[k + step]
        return k + step * (a - level) / (a - b)

    return crossing(1) - crossing(-1)

# %% pts/csas/05_psf.pct.py 17
def spectral_coords(grid: SceneGrid) -> tuple[np.ndarray, np.ndarray]:
    """(rho, phi) of every unshifted FFT bin of *grid*."""
    u = sfft.fftfreq(grid.n, d=grid.pitch)
    ux, uy = np.meshgrid(u, u, indexing="xy")
    return np.hypot(ux, uy), np.arctan2(uy, ux)

def centered_psf_spectrum(rho, params: AnalyticPsfParams):
    """π²√2·(a0σ/k)·exp(−2a0²(k − πρ)²)."""
    rho = np.asarray(rho, dtype=float)
    a0, s, k = params.a0, params.sigma_w, params.k
    return np.pi**2 * np.sqrt(2) * a0 * s / k * np.exp(-2 * a0**2 * (k - np.pi * rho) ** 2)

def general_psf_phase(rho, phi, R: float, theta0: float):
    """exp(j·2πρR·cos(θ0 − φ)), the spectrum ramp of a PSF translated to (R, θ0)."""
    if R < 0:
        raise ValueError(f"Invalid R {R}: must be >= 0")
    return np.exp(1j * 2 * np.pi * np.asarray(rho) * R * np.cos(theta0 - np.asarray(phi)))

def general_psf_spectrum(
    rho, phi, params: AnalyticPsfParams, R: float, theta0: float,
    weighting: Callable[[np.ndarray], np.ndarray] | None = None,
):
    """Centered spectrum × angular weighting g(φ + θ0 + π/2) × translation ramp.

    The weighting defaults to one everywhere.
    """
    phi = np.asarray(phi, dtype=float)
    g = np.ones_like(phi) if weighting is None else weighting(phi + theta0 + np.pi / 2)
    return centered_psf_spectrum(rho, params) * g * general_psf_phase(rho, phi, R, theta0)

# %% pts/csas/05_psf.pct.py 19
def psf_kernel(psf: Psf) -> np.ndarray:
    """PSF image rolled so its center pixel sits at index (0, 0)."""
    i, j = psf.center
    return np.roll(psf.image.data, (-i, -j), axis=(0, 1))

def psf_spectrum(psf: Psf) -> np.ndarray:
    """Spectrum of the centered kernel in the ``e^{+j2πu·x}`` convention."""
    return sfft.ifft2(psf_kernel(psf)) * psf.grid.n**2

def translate_psf(psf: Psf, R: float, theta0: float) -> Psf:
    """Shift a PSF by (R cos θ0, R sin θ0) meters with the spectral phase ramp."""
    grid = psf.grid
    rho, phi = spectral_coords(grid)
    shifted = sfft.fft2(psf_spectrum(psf) * general_psf_phase(rho, phi, R, theta0)) / grid.n**2
    i, j = psf.center
    data = np.roll(shifted, (i, j), axis=(0, 1))
    ci = int(round(i + R * np.sin(theta0) / grid.pitch))
    cj = int(round(j + R * np.cos(theta0) / grid.pitch))
    return replace(psf, image=ComplexImage(data, grid), center=(ci % grid.n, cj % grid.n))

# %% pts/csas/05_psf.pct.py 21
def radial_profile(psf: Psf) -> tuple[np.ndarray, np.ndarray]:
    """(rho, mean |spectrum|) in bins one frequency step wide."""
    grid = psf.grid
    rho, _ = spectral_coords(grid)
    mag = np.abs(psf_spectrum(psf))
    step = 1 / (grid.n * grid.pitch)
    bins = np.rint(rho / step).astype(int)
    counts = np.bincount(bins.ravel())
    sums = np.bincount(bins.ravel(), weights=mag.ravel())
    keep = counts > 0
    centers = np.arange(counts.size)[keep] * step
    return centers, sums[keep] / counts[keep]

def fit_centered_psf_params(psf: Psf) -> AnalyticPsfParams:
    """Least-squares fit of (a0, σ, k) to the radial magnitude spectrum."""
    rho, prof = radial_profile(psf)
    peak = int(np.argmax(prof))
    k0 = np.pi * max(rho[peak], rho[1])
    above = rho[prof >= prof[peak] / 2]
    width = max(above.max() - above.min(), rho[1])
    a0 = 1.0 / (np.pi * width)
    s0 = prof[peak] * k0 / (np.pi**2 * np.sqrt(2) * a0)

    def model(r, a0, s, k):
        return centered_psf_spectrum(r, AnalyticPsfParams(abs(a0) + 1e-12, s, abs(k) + 1e-12))

    (a0, s, k), _ = curve_fit(model, rho, prof, p0=[a0, s0, k0], maxfev=20000)
    return AnalyticPsfParams(a0=abs(a0), sigma_w=s, k=abs(k))
