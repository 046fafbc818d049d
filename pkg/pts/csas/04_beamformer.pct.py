# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp beamformer

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Beamformer
#
# Pulse compression and delay-and-sum image formation.

# %%
#|export
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import resample

from csas.geometry import SceneGrid
from csas.signal import TimeSeries, Waveform, analytic_signal, match_filter
from csas.simulator import PingSet

# %%
#|export
@dataclass(frozen=True)
class ComplexImage:
    """An n×n complex image on a scene grid (DAS output, PSF, or field estimate)."""
    data: np.ndarray
    grid: SceneGrid

    def __post_init__(self):
        if self.data.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"image shape {self.data.shape} does not match grid n={self.grid.n}")

# %% [markdown]
# ## Pulse compression
#
# Matched filter, analytic signal, then FFT oversampling so the linear
# interpolation inside DAS works on a finely sampled series.

# %%
#|export
def pulse_compress(pings: PingSet, w: Waveform, oversample: int = 8) -> PingSet:
    """Matched-filter and convert every ping to its analytic signal."""
    if oversample < 1:
        raise ValueError(f"Invalid oversample {oversample}: must be >= 1")
    mf = match_filter(TimeSeries(pings.pings, pings.fs, pings.t0), w)
    a = analytic_signal(mf).samples
    if oversample > 1:
        a = resample(a, a.shape[1] * oversample, axis=1)
    return PingSet(a, pings.fs * oversample, pings.t0, pings.ring)

# %% [markdown]
# ## Delay and sum
#
# `I(x, y) = Σ_θ S_θ(2‖T_θ − (x, y, z0)‖/c)` with linear interpolation of the
# complex samples; delays outside the recorded window contribute zero. Work
# is split over row blocks and each pixel sums its angles in ascending order.

# %%
#|exporti
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

# %%
#|export
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

# %% [markdown]
# ## Display scaling

# %%
#|export
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
