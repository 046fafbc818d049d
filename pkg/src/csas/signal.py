# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/01_signal.pct.py

__all__ = ['TimeSeries', 'Waveform', 'analytic_signal', 'lfm_chirp', 'match_filter']

# %% pts/csas/01_signal.pct.py 3
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft
from scipy.signal import hilbert

# %% pts/csas/01_signal.pct.py 5
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

# %% pts/csas/01_signal.pct.py 6
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

# %% pts/csas/01_signal.pct.py 8
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

# %% pts/csas/01_signal.pct.py 10
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

# %% pts/csas/01_signal.pct.py 12
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
