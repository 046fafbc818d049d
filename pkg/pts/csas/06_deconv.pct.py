# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp deconv

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Deconvolution
#
# The DAS image is modeled as the circular convolution of a complex scene with
# the centered PSF, `I = σ̃ ∗ I_PSF`. This module holds the forward operator,
# its adjoint and the non-network solvers: inverse filter, Wiener, heavy-ball
# gradient descent with optional TV or gradient regularization, and the
# phase-blind successive approximation (BREMEN).
#
# Complex gradients follow `dL = Re Σ conj(g)·dx`, i.e. the real and imaginary
# parts are treated as independent real variables.

# %%
#|export
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np
from rich.console import Console
from scipy import fft as sfft

from csas.beamformer import ComplexImage
from csas.config import BremenConfig, GdConfig
from csas.psf import Psf, psf_kernel

console = Console()

# %% [markdown]
# ## Types and errors

# %%
#|export
@dataclass(frozen=True)
class ComplexField(ComplexImage):
    """Predicted complex scatterers σ̃ on the scene grid."""

@dataclass
class DeconvResult:
    field: ComplexField
    loss_trace: list[float] = field(default_factory=list)
    iterations_run: int = 0
    best_iteration: int = 0
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.field.data)

class DivergedError(RuntimeError):
    """An iterative solver's loss blew up. Carries the loss trace so far."""
    def __init__(self, message: str, trace: list[float], iteration: int):
        super().__init__(message)
        self.trace = trace
        self.iteration = iteration

# %% [markdown]
# ## Forward operator

# %%
#|exporti
def _check_shapes(data: np.ndarray, psf: Psf) -> None:
    if data.shape != psf.image.data.shape:
        raise ValueError(f"Size mismatch: field {data.shape} vs PSF {psf.image.data.shape}")

# %%
#|export
def kernel_spectrum(psf: Psf) -> np.ndarray:
    """FFT of the PSF with its center pixel moved to the origin."""
    return sfft.fft2(psf_kernel(psf))

def convolve_spectrum(data: np.ndarray, H: np.ndarray) -> np.ndarray:
    return sfft.ifft2(sfft.fft2(data) * H)

def correlate_spectrum(data: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`convolve_spectrum`."""
    return sfft.ifft2(sfft.fft2(data) * np.conj(H))

def fft_convolve(field: ComplexImage, psf: Psf) -> ComplexImage:
    """Circular convolution of *field* with *psf*, PSF center as origin."""
    _check_shapes(field.data, psf)
    return ComplexImage(convolve_spectrum(field.data, kernel_spectrum(psf)), field.grid)

# %% [markdown]
# ## Direct inverses

# %%
#|export
def inverse_filter(I: ComplexImage, psf: Psf, eps: float = 1e-8) -> ComplexField:
    """Spectral division, skipping bins where |Ĥ| < eps·max|Ĥ|."""
    if not eps > 0:
        raise ValueError(f"Invalid eps {eps}: must be > 0")
    _check_shapes(I.data, psf)
    H = kernel_spectrum(psf)
    keep = np.abs(H) >= eps * np.abs(H).max()
    ratio = np.zeros_like(H)
    ratio[keep] = sfft.fft2(I.data)[keep] / H[keep]
    return ComplexField(sfft.ifft2(ratio), I.grid)

# %%
#|export
def wiener(I: ComplexImage, psf: Psf, alpha: float = 1e-2) -> ComplexField:
    """Ĥ*·Î / (|Ĥ|² + α); bins with a zero denominator are set to zero."""
    if alpha < 0:
        raise ValueError(f"Invalid alpha {alpha}: must be >= 0")
    _check_shapes(I.data, psf)
    H = kernel_spectrum(psf)
    num = np.conj(H) * sfft.fft2(I.data)
    den = np.abs(H) ** 2 + alpha
    out = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return ComplexField(sfft.ifft2(out), I.grid)

# %% [markdown]
# ## Objective terms

# %%
#|export
def datafit_grad(field: ComplexImage, psf: Psf, I: ComplexImage) -> tuple[float, np.ndarray]:
    """Squared residual ‖σ̃∗I_PSF − I‖² and its gradient 2·Aᴴ(residual)."""
    _check_shapes(field.data, psf)
    _check_shapes(I.data, psf)
    H = kernel_spectrum(psf)
    r = convolve_spectrum(field.data, H) - I.data
    return float(np.sum(np.abs(r) ** 2)), 2 * correlate_spectrum(r, H)

# %% [markdown]
# Periodic forward differences keep the regularizers consistent with the
# circular convolution boundary.

# %%
#|export
def forward_diff(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(Dx, Dy) periodic forward differences along columns and rows."""
    return np.roll(x, -1, axis=1) - x, np.roll(x, -1, axis=0) - x

def forward_diff_adjoint(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    return (np.roll(dx, 1, axis=1) - dx) + (np.roll(dy, 1, axis=0) - dy)

def regularizer_value_grad(field: ComplexImage, kind: str, eps_tv: float = 1e-6) -> tuple[float, np.ndarray]:
    """Value and gradient of the ``tv`` or ``gradient`` smoothness term."""
    x = field.data
    dx, dy = forward_diff(x)
    if kind == "tv":
        if not eps_tv > 0:
            raise ValueError(f"Invalid eps_tv {eps_tv}: must be > 0")
        mag = np.sqrt(np.abs(dx) ** 2 + np.abs(dy) ** 2 + eps_tv**2)
        return float(mag.sum()), forward_diff_adjoint(dx / mag, dy / mag)
    if kind == "gradient":
        value = np.sum(np.abs(dx) ** 2 + np.abs(dy) ** 2)
        return float(value), 2 * forward_diff_adjoint(dx, dy)
    raise ValueError(f"Unknown regularizer '{kind}'. Valid: tv, gradient")

# %% [markdown]
# ## Gradient descent
#
# Full-batch heavy ball (`buf ← μ·buf + g`, `x ← P(x − α·buf)`). The step is
# `α = learning_rate / L` with `L = 2·max|Ĥ|² + 16β`, so `learning_rate = 1`
# is a safe default for any PSF gain. The projection `P` implements the
# `real` and `nonnegative` constraints. The iterate with the lowest objective
# is returned.

# %%
#|exporti
def _project(x: np.ndarray, constraint: str) -> np.ndarray:
    if constraint == "real":
        return x.real.astype(complex)
    if constraint == "nonnegative":
        return np.maximum(x.real, 0.0).astype(complex)
    return x

def _initial_field(I: np.ndarray, cfg: GdConfig) -> np.ndarray:
    if cfg.init == "uniform":
        rng = np.random.default_rng(cfg.seed)
        return rng.uniform(0.0, cfg.init_scale, size=I.shape).astype(complex)
    peak = np.abs(I).max()
    if peak == 0:
        return np.zeros_like(I, dtype=complex)
    return cfg.init_scale * I / peak

# %%
#|export
def gd_deconvolve(
    I: ComplexImage, psf: Psf, cfg: GdConfig = GdConfig(), progress_every: int = 0, snapshots: Iterable[int] = (),
) -> DeconvResult:
    """Regularized heavy-ball gradient descent on ‖σ̃∗I_PSF − I‖² + β·R(σ̃).

    Iterates whose index is in *snapshots* are kept in `DeconvResult.snapshots`.
    """
    keep = set(snapshots)
    shots: dict[int, np.ndarray] = {}
    _check_shapes(I.data, psf)
    H = kernel_spectrum(psf)
    beta = cfg.reg_weight if cfg.regularizer != "none" else 0.0
    step = cfg.learning_rate / (2 * np.abs(H).max() ** 2 + 16 * beta)

    def objective(x):
        r = convolve_spectrum(x, H) - I.data
        fit = float(np.sum(np.abs(r) ** 2))
        grad = 2 * correlate_spectrum(r, H)
        total = fit
        if beta > 0:
            value, g = regularizer_value_grad(ComplexImage(x, I.grid), cfg.regularizer, cfg.eps_tv)
            total += beta * value
            grad = grad + beta * g
        return fit, total, grad

    x = _project(_initial_field(I.data, cfg), cfg.constraint)
    buf = np.zeros_like(x)
    trace: list[float] = []
    best_x, best_total, best_k = x, np.inf, 0
    first_total = None
    for k in range(cfg.iterations + 1):
        fit, total, grad = objective(x)
        trace.append(fit)
        if first_total is None:
            first_total = total
        if not np.isfinite(total) or total > 1e6 * max(first_total, np.finfo(float).tiny):
            raise DivergedError(f"Gradient descent diverged at iteration {k} (loss {total:.3e})", trace, k)
        if total < best_total:
            best_x, best_total, best_k = x, total, k
        if k in keep:
            shots[k] = x.copy()
        if progress_every and k % progress_every == 0:
            console.print(f"  [dim]iter {k}: loss {fit:.4e}[/dim]")
        if k == cfg.iterations:
            break
        buf = cfg.momentum * buf + grad
        x = _project(x - step * buf, cfg.constraint)
    return DeconvResult(ComplexField(best_x, I.grid), trace, cfg.iterations, best_k, shots)

# %% [markdown]
# ## BREMEN
#
# Successive approximation on the real part of the image with the real part
# of the PSF, clamped to non-negative values:
# `σ ← max(0, σ + λ·(Re I − Re(h)∗σ))`, starting from zero. It cannot
# represent phase, which is the point of comparing it with the complex
# solvers.

# %%
#|export
def bremen_deconvolve(
    I: ComplexImage,
    psf: Psf,
    relaxation: float | None = None,
    iterations: int = 500,
    progress_every: int = 0,
    snapshots: Iterable[int] = (),
) -> DeconvResult:
    """Phase-blind non-negative successive approximation."""
    keep = set(snapshots)
    shots: dict[int, np.ndarray] = {}
    _check_shapes(I.data, psf)
    if iterations < 0:
        raise ValueError(f"Invalid iterations {iterations}: must be >= 0")
    Hr = sfft.fft2(psf_kernel(psf).real)
    limit = 2 / np.abs(Hr).max()
    if relaxation is None:
        relaxation = 1 / np.abs(Hr).max()
    if not 0 < relaxation < limit:
        raise ValueError(f"Invalid relaxation {relaxation}: must be in (0, {limit:.4g})")
    target = I.data.real
    sigma = np.zeros_like(target)
    trace: list[float] = []
    best, best_loss, best_k = sigma, np.inf, 0
    for k in range(iterations + 1):
        r = target - sfft.ifft2(sfft.fft2(sigma) * Hr).real
        loss = float(np.sum(r**2))
        trace.append(loss)
        if loss < best_loss:
            best, best_loss, best_k = sigma, loss, k
        if k in keep:
            shots[k] = sigma.astype(complex)
        if progress_every and k % progress_every == 0:
            console.print(f"  [dim]iter {k}: loss {loss:.4e}[/dim]")
        if k == iterations:
            break
        sigma = np.maximum(sigma + relaxation * r, 0.0)
    return DeconvResult(ComplexField(best.astype(complex), I.grid), trace, iterations, best_k, shots)

def bremen_from_config(
    I: ComplexImage, psf: Psf, cfg: BremenConfig, progress_every: int = 0, snapshots: Iterable[int] = (),
) -> DeconvResult:
    return bremen_deconvolve(I, psf, cfg.relaxation, cfg.iterations, progress_every, snapshots)
