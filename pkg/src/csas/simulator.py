# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/03_simulator.pct.py

__all__ = ['PingSet', 'ScatterScene', 'add_noise', 'angle_rng', 'apply_phase_quadrants', 'apply_random_phase', 'noise_variance_for_psnr', 'quadrant_phase', 'scene_points', 'simulate', 'synthesize', 'time_window']

# %% pts/csas/03_simulator.pct.py 3
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft as sfft

from .geometry import SceneGrid, TransducerRing
from .signal import Waveform, _next_pow2

# %% pts/csas/03_simulator.pct.py 5
@dataclass(frozen=True)
class ScatterScene:
    """Ground-truth scatterers on a grid: non-negative σ plus an optional phase map."""
    grid: SceneGrid
    sigma: np.ndarray
    phase: np.ndarray | None = None

    def __post_init__(self):
        shape = (self.grid.n, self.grid.n)
        if self.sigma.shape != shape:
            raise ValueError(f"sigma shape {self.sigma.shape} does not match grid {shape}")
        if np.any(self.sigma < 0):
            raise ValueError("sigma must be non-negative")
        if self.phase is not None and self.phase.shape != shape:
            raise ValueError(f"phase shape {self.phase.shape} does not match grid {shape}")

    @property
    def amplitudes(self) -> np.ndarray:
        """Complex scatterer amplitudes σ·exp(jφ)."""
        if self.phase is None:
            return self.sigma.astype(complex)
        return self.sigma * np.exp(1j * self.phase)

# %% pts/csas/03_simulator.pct.py 6
@dataclass(frozen=True)
class PingSet:
    """One row of samples per ring angle. ``t0`` is the time of column 0."""
    pings: np.ndarray
    fs: float
    t0: float
    ring: TransducerRing

    def __post_init__(self):
        if self.pings.ndim != 2 or self.pings.shape[0] != self.ring.n_angles:
            raise ValueError(
                f"pings shape {self.pings.shape} does not match ring with {self.ring.n_angles} angles"
            )

    @property
    def n_t(self) -> int:
        return self.pings.shape[1]

# %% pts/csas/03_simulator.pct.py 8
def time_window(
    ring: TransducerRing, grid: SceneGrid, w: Waveform, c: float, points: np.ndarray | None = None,
) -> tuple[float, int]:
    """Return ``(t0, n_t)`` covering every echo from the grid (and extra *points*)."""
    dz = ring.height - grid.z0
    hd = grid.half_diagonal
    r_min = np.hypot(max(ring.radius - hd, 0.0), dz)
    r_max = np.hypot(ring.radius + hd, dz)
    if points is not None and len(points):
        d = np.linalg.norm(ring.positions[:, None, :] - points[None, :, :], axis=-1)
        r_min, r_max = min(r_min, d.min()), max(r_max, d.max())
    start = int(np.floor((2 * r_min / c - w.duration) * w.fs))
    start = max(start, 0)
    t0 = start / w.fs
    n_t = int(np.ceil((2 * r_max / c - t0) * w.fs)) + w.samples.size + 1
    return t0, n_t

# %% pts/csas/03_simulator.pct.py 10
_BLOCK = 2048

def _angle_spectrum(pos_t, points, amps, f, W, c, t0):
    spec = np.zeros(f.size, dtype=complex)
    dist = np.linalg.norm(points - pos_t[None, :], axis=1)
    tau = 2 * dist / c - t0
    for s in range(0, tau.size, _BLOCK):
        ph = np.exp(-2j * np.pi * np.outer(tau[s:s + _BLOCK], f))
        spec += amps[s:s + _BLOCK] @ ph
    return spec * W

# %% pts/csas/03_simulator.pct.py 11
def synthesize(
    points: np.ndarray,
    amplitudes: np.ndarray,
    ring: TransducerRing,
    grid: SceneGrid,
    w: Waveform,
    c: float,
    workers: int = 1,
) -> PingSet:
    """Noiseless pings for arbitrary point scatterers.

    *points* is (P, 3) in meters, *amplitudes* (P,) complex. The time window
    is derived from *grid* and widened if a point lies outside it.
    """
    if not c > 0:
        raise ValueError(f"Invalid sound speed {c}: must be > 0")
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    amps = np.asarray(amplitudes, dtype=complex).ravel()
    if amps.size != points.shape[0]:
        raise ValueError(f"{points.shape[0]} points but {amps.size} amplitudes")
    t0, n_t = time_window(ring, grid, w, c, points)
    if amps.size == 0:
        return PingSet(np.zeros((ring.n_angles, n_t)), w.fs, t0, ring)

    nfft = _next_pow2(n_t + w.samples.size)
    W = sfft.rfft(w.samples, nfft)
    f = sfft.rfftfreq(nfft, 1 / w.fs)
    positions = ring.positions

    def one(k: int) -> np.ndarray:
        spec = _angle_spectrum(positions[k], points, amps, f, W, c, t0)
        return sfft.irfft(spec, nfft)[:n_t]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(ring.n_angles)))
    else:
        rows = [one(k) for k in range(ring.n_angles)]
    return PingSet(np.stack(rows), w.fs, t0, ring)

# %% pts/csas/03_simulator.pct.py 13
def angle_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))

def add_noise(pings: PingSet, noise_eta: float, seed: int) -> PingSet:
    """Add i.i.d. Gaussian noise of variance *noise_eta* to every ping."""
    if noise_eta < 0:
        raise ValueError(f"Invalid noise variance {noise_eta}: must be >= 0")
    if noise_eta == 0:
        return pings
    std = np.sqrt(noise_eta)
    noisy = np.stack([
        row + angle_rng(seed, k).normal(0.0, std, size=row.shape)
        for k, row in enumerate(pings.pings)
    ])
    return replace(pings, pings=noisy)

def noise_variance_for_psnr(psnr_db: float) -> float:
    """Noise variance η for a waveform PSNR, with PSNR = 10·log10(1/η)."""
    if np.isnan(psnr_db):
        raise ValueError("psnr_db must not be NaN")
    if np.isinf(psnr_db) and psnr_db > 0:
        return 0.0
    return float(10 ** (-psnr_db / 10))

# %% pts/csas/03_simulator.pct.py 15
def scene_points(scene: ScatterScene) -> tuple[np.ndarray, np.ndarray]:
    """(P, 3) positions and complex amplitudes of the non-zero pixels, row-major."""
    X, Y = scene.grid.mesh()
    amps = scene.amplitudes
    mask = scene.sigma != 0
    points = np.stack([X[mask], Y[mask], np.full(mask.sum(), scene.grid.z0)], axis=1)
    return points, amps[mask]

def simulate(
    scene: ScatterScene,
    ring: TransducerRing,
    w: Waveform,
    c: float,
    noise_eta: float = 0.0,
    seed: int = 0,
    workers: int = 1,
) -> PingSet:
    """Measured pings of *scene* from every ring angle."""
    if noise_eta < 0:
        raise ValueError(f"Invalid noise variance {noise_eta}: must be >= 0")
    points, amps = scene_points(scene)
    pings = synthesize(points, amps, ring, scene.grid, w, c, workers=workers)
    return add_noise(pings, noise_eta, seed)

# %% pts/csas/03_simulator.pct.py 17
def quadrant_phase(n: int) -> np.ndarray:
    """0 on the top-right and bottom-left quadrants, π/2 on the other two."""
    h = n // 2
    phase = np.full((n, n), np.pi / 2)
    phase[:h, h:] = 0.0
    phase[h:, :h] = 0.0
    return phase

def apply_phase_quadrants(scene: ScatterScene) -> ScatterScene:
    """Assign quadrant phases so two quadrants echo real and two imaginary."""
    return replace(scene, phase=quadrant_phase(scene.grid.n))

def apply_random_phase(scene: ScatterScene, seed: int) -> ScatterScene:
    """Assign an i.i.d. uniform [0, 2π) phase to every pixel."""
    rng = np.random.default_rng(seed)
    return replace(scene, phase=rng.uniform(0.0, 2 * np.pi, size=scene.sigma.shape))
