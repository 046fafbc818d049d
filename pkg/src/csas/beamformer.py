# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/04_beamformer.pct.py

__all__ = ['ComplexImage', 'das', 'log_magnitude', 'pulse_compress']

# %% pts/csas/04_beamformer.pct.py 3
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import resample

from .geometry import SceneGrid
from .signal import TimeSeries, Waveform, analytic_signal, match_filter
from .simulator import PingSet

# %% pts/csas/04_beamformer.pct.py 4
@dataclass(frozen=True)
class ComplexImage:
    """An n×n complex image on a scene grid (DAS output, PSF, or field estimate)."""
    data: np.ndarray
    grid: SceneGrid

    def __post_init__(self):
        if self.data.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"image shape {self.data.shape} does not match grid n={self.grid.n}")

# %% pts/csas/04_beamformer.pct.py 6
def pulse_compress(pings: PingSet, w: Waveform, oversample: int = 8) -> PingSet:
    """Matched-filter and convert every ping to its analytic signal."""
    if oversample < 1:
        raise ValueError(f"Invalid oversample {oversample}: must be >= 1")
    mf = match_filter(TimeSeries(pings.pings, pings.fs, pings.t0), w)
    a = analytic_signal(mf).samples
    if oversample > 1:
        a = resample(a, a.shape[1] * oversample, axis=1)
    return PingSet(a, pings.fs * oversample, pings.t0, pings.ring)

# %% pts/csas/04_beamformer.pct.py 8
def _das_rows(data, positions, t0, fs, X, Y, z0, c):
    n_t = data.shape[1]
    k = np.arange(n_t)
    out = np.zeros(X.shape, dtype=complex)
    for pos, row in zip(positions, data):
        d = np.sqrt((X - pos[0]) ** 2 + (Y - pos[1]) ** 2 + (z0 - pos[2]) ** 2)
        idx = (2 * d / c - t0) * fs
        re = np.interp(idx, k, row.real, left=0.0, right=0.0)
        im = np.interp(idx, k, row.imag, left=0.0, right=0.0)
        out += re + 1j * im
    return out

# %% pts/csas/04_beamformer.pct.py 9
def das(pings: PingSet, grid: SceneGrid, c: float, workers: int = 1) -> ComplexImage:
    """Delay-and-sum reconstruction from compressed (analytic) pings."""
    if pings.pings.size == 0:
        raise ValueError("Cannot beamform an empty ping set")
    if not c > 0:
        raise ValueError(f"Invalid sound speed {c}: must be > 0")
    data = np.asarray(pings.pings, dtype=complex)
    X, Y = grid.mesh()
    positions = pings.ring.positions
    blocks = np.array_split(np.arange(grid.n), max(1, min(workers, grid.n)))

    def run(rows):
        return _das_rows(data, positions, pings.t0, pings.fs, X[rows], Y[rows], grid.z0, c)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    return ComplexImage(np.concatenate(parts, axis=0), grid)

# %% pts/csas/04_beamformer.pct.py 11
def log_magnitude(img: ComplexImage, floor_db: float = -60.0) -> np.ndarray:
    """20·log10(|I|/max|I|), clipped below at *floor_db*."""
    if not floor_db < 0:
        raise ValueError(f"Invalid floor_db {floor_db}: must be < 0")
    mag = np.abs(img.data)
    peak = mag.max()
    if peak == 0:
        return np.full(mag.shape, float(floor_db))
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(mag / peak)
    return np.maximum(db, floor_db)
