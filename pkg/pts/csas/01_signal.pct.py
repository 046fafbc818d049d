# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp signal

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Signal
#
# Transmit waveform synthesis, matched filtering and the analytic signal.
# Everything here is a pure function of its inputs.

# %%
#|export
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft
from scipy.signal import hilbert

# %% [markdown]
# ## Types

# %%
#|export
@dataclass(frozen=True)
class Waveform:
    """Sampled real transmit chirp and the parameters that produced it."""
    samples: np.ndarray
    fs: float
    f_start: float
    f_stop: float
    duration: float

    @property
    def center_frequency(self) -> float:
        return 0.5 * (self.f_start + self.f_stop)

    @property
    def bandwidth(self) -> float:
        return abs(self.f_stop - self.f_start)

    @property
    def max_frequency(self) -> float:
        return max(self.f_start, self.f_stop)

# %%
#|export
@dataclass(frozen=True)
class TimeSeries:
    """A real or complex series sampled at ``fs``; ``t0`` is the time of sample 0."""
    samples: np.ndarray
    fs: float
    t0: float = 0.0

    def __post_init__(self):
        if not self.fs > 0:
            raise ValueError(f"Invalid sample rate {self.fs}: must be > 0")
        if np.size(self.samples) < 1:
            raise ValueError("TimeSeries must hold at least one sample")

# %% [markdown]
# ## LFM chirp
#
# Phase is `2π(½·k·t² + f_start·t)` with the signed sweep rate
# `k = (f_stop − f_start)/T`, so a 30→10 kHz chirp really sweeps downward.

# %%
#|export
def lfm_chirp(f_start: float, f_stop: float, duration: float, fs: float) -> Waveform:
    """Sample a linear frequency modulated chirp sweeping f_start → f_stop."""
    if not fs > 0:
        raise ValueError(f"Invalid sample rate {fs}: must be > 0")
    if not duration > 0:
        raise ValueError(f"Invalid duration {duration}: must be > 0")
    if fs < 2 * max(f_start, f_stop):
        raise ValueError(
            f"Sample rate {fs} Hz violates Nyquist for a sweep up to {max(f_start, f_stop)} Hz"
        )
    n = int(round(fs * duration))
    t = np.arange(n) / fs
    rate = (f_stop - f_start) / duration
    phase = 2 * np.pi * (0.5 * rate * t**2 + f_start * t)
    return Waveform(samples=np.cos(phase), fs=fs, f_start=f_start, f_stop=f_stop, duration=duration)

# %% [markdown]
# ## Matched filter
#
# Linear (not circular) cross-correlation: both sequences are zero-padded to
# the next power of two at or above `len(meas) + len(w) − 1` and the result is
# truncated so that output index equals lag in samples. The filter is left
# unnormalized.

# %%
#|export
def _next_pow2(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())

def match_filter(meas: TimeSeries, w: Waveform) -> TimeSeries:
    """Cross-correlate a real measurement with the transmit waveform."""
    if meas.fs != w.fs:
        raise ValueError(f"Sample rate mismatch: measurement {meas.fs} Hz, waveform {w.fs} Hz")
    m = np.asarray(meas.samples, dtype=float)
    nfft = _next_pow2(m.shape[-1] + w.samples.size - 1)
    spec = sfft.rfft(m, nfft, axis=-1) * np.conj(sfft.rfft(w.samples, nfft))
    out = sfft.irfft(spec, nfft, axis=-1)[..., : m.shape[-1]]
    return TimeSeries(samples=out, fs=meas.fs, t0=meas.t0)

# %% [markdown]
# ## Analytic signal
#
# One-sided spectrum method via `scipy.signal.hilbert`. Odd lengths are padded
# by one sample so the FFT always has a Nyquist bin, then cut back.

# %%
#|export
def analytic_signal(x: TimeSeries) -> TimeSeries:
    """Complex analytic signal whose real part is ``x``."""
    samples = np.asarray(x.samples, dtype=float)
    n = samples.shape[-1]
    if n < 2:
        raise ValueError(f"Analytic signal needs at least 2 samples, got {n}")
    n_even = n + (n % 2)
    a = hilbert(samples, N=n_even, axis=-1)[..., :n]
    # exact real-part identity
    a = samples + 1j * a.imag
    return TimeSeries(samples=a, fs=x.fs, t0=x.t0)

# %% [markdown]
# ### Example

# %%
w = lfm_chirp(30e3, 10e3, 1e-3, 100e3)
mf = match_filter(TimeSeries(w.samples, w.fs), w)
w.samples.size, int(np.argmax(mf.samples))
