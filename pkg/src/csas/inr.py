# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/07_inr.pct.py

__all__ = ['Adam', 'FourierEncoding', 'MlpParams', 'N_LAYERS', 'NumericOverflowError', 'SinrResult', 'console', 'encode', 'grid_coords', 'init_mlp', 'init_sinr', 'make_encoding', 'mlp_forward', 'output_gradient_magnitude', 'pack_sinr', 'relu_mask', 'sinr_deconvolve', 'sinr_loss_backward', 'unpack_sinr']

# %% pts/csas/07_inr.pct.py 3
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np
from rich.console import Console

from .beamformer import ComplexImage
from .config import SinrConfig
from .deconv import ComplexField, DeconvResult, DivergedError, convolve_spectrum, correlate_spectrum, kernel_spectrum
from .geometry import SceneGrid
from .psf import Psf

console = Console()

N_LAYERS = 7

# %% pts/csas/07_inr.pct.py 5
class NumericOverflowError(ArithmeticError):
    """The training loss became non-finite."""
    def __init__(self, message: str, iteration: int | None = None):
        super().__init__(message)
        self.iteration = iteration

# %% pts/csas/07_inr.pct.py 7
@dataclass(frozen=True)
class FourierEncoding:
    b_matrix: np.ndarray    # (M, 2), standard normal
    kappa: float

    def __post_init__(self):
        if self.b_matrix.ndim != 2 or self.b_matrix.shape[1] != 2 or self.b_matrix.shape[0] < 1:
            raise ValueError(f"b_matrix must have shape (M, 2), got {self.b_matrix.shape}")
        if not self.kappa > 0:
            raise ValueError(f"Invalid kappa {self.kappa}: must be > 0")

    @property
    def M(self) -> int:
        return self.b_matrix.shape[0]

def make_encoding(M: int, kappa: float, rng: np.random.Generator) -> FourierEncoding:
    """Draw B ~ N(0, 1) of shape (M, 2) once for a run."""
    return FourierEncoding(b_matrix=rng.standard_normal((M, 2)), kappa=float(kappa))

# %% pts/csas/07_inr.pct.py 8
def grid_coords(n: int) -> np.ndarray:
    """(n², 2) pixel coordinates in [−1, 1], (x, y) order, row-major."""
    t = np.linspace(-1.0, 1.0, n)
    X, Y = np.meshgrid(t, t, indexing="xy")
    return np.stack([X.ravel(), Y.ravel()], axis=1)

def encode(coords: np.ndarray, enc: FourierEncoding) -> np.ndarray:
    """Row i is [cos(2πκ·B zᵢ), sin(2πκ·B zᵢ)]."""
    proj = 2 * np.pi * enc.kappa * (coords @ enc.b_matrix.T)
    return np.concatenate([np.cos(proj), np.sin(proj)], axis=1)

# %% pts/csas/07_inr.pct.py 10
@dataclass
class MlpParams:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @property
    def hidden_width(self) -> int:
        return self.weights[0].shape[1]

    def zeros_like(self) -> "MlpParams":
        return MlpParams([np.zeros_like(w) for w in self.weights], [np.zeros_like(b) for b in self.biases])

    def arrays(self) -> list[np.ndarray]:
        return [a for pair in zip(self.weights, self.biases) for a in pair]

def init_mlp(input_dim: int, hidden_width: int, rng: np.random.Generator, n_layers: int = N_LAYERS) -> MlpParams:
    """Weights uniform in ±√(1/fan_in), zero biases."""
    dims = [input_dim] + [hidden_width] * (n_layers - 1) + [2]
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = np.sqrt(1.0 / fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)

# %% pts/csas/07_inr.pct.py 11
def _forward(params: MlpParams, features: np.ndarray):
    if features.shape[1] != params.weights[0].shape[0]:
        raise ValueError(
            f"Feature dim {features.shape[1]} does not match input dim {params.weights[0].shape[0]}"
        )
    acts, pre = [features], []
    a = features
    last = len(params.weights) - 1
    for i, (W, b) in enumerate(zip(params.weights, params.biases)):
        z = a @ W + b
        if i == last:
            return z, acts, pre
        pre.append(z)
        a = np.maximum(z, 0.0)
        acts.append(a)

def _backward(params: MlpParams, dout: np.ndarray, acts, pre) -> MlpParams:
    grads = params.zeros_like()
    d = dout
    for i in range(len(params.weights) - 1, -1, -1):
        grads.weights[i] = acts[i].T @ d
        grads.biases[i] = d.sum(axis=0)
        if i > 0:
            d = (d @ params.weights[i].T) * (pre[i - 1] > 0)
    return grads

def _to_complex(out: np.ndarray, n: int) -> np.ndarray:
    return (out[:, 0] + 1j * out[:, 1]).reshape(n, n)

# %% pts/csas/07_inr.pct.py 12
def relu_mask(z: np.ndarray) -> np.ndarray:
    """Backward mask of the ReLU: exactly the positive pre-activations."""
    return z > 0

def mlp_forward(params: MlpParams, features: np.ndarray, grid: SceneGrid) -> ComplexField:
    """Network output reshaped to the grid; channel 0 real, channel 1 imaginary."""
    if features.shape[0] != grid.n**2:
        raise ValueError(f"{features.shape[0]} feature rows for a {grid.n}×{grid.n} grid")
    out, _, _ = _forward(params, features)
    return ComplexField(_to_complex(out, grid.n), grid)

# %% pts/csas/07_inr.pct.py 14
def sinr_loss_backward(
    params: MlpParams, enc: FourierEncoding, psf: Psf, I: ComplexImage, iteration: int | None = None,
) -> tuple[float, MlpParams]:
    """Squared data-fit loss of the network output and its parameter gradients."""
    n = I.grid.n
    loss, grads, _ = _loss_grads(params, encode(grid_coords(n), enc), kernel_spectrum(psf), I.data, iteration)
    return loss, grads

# %% pts/csas/07_inr.pct.py 15
def _loss_grads(params, features, H, target, iteration=None):
    n = target.shape[0]
    out, acts, pre = _forward(params, features)
    field = _to_complex(out, n)
    r = convolve_spectrum(field, H) - target
    loss = float(np.sum(np.abs(r) ** 2))
    if not np.isfinite(loss):
        raise NumericOverflowError(f"Non-finite loss at iteration {iteration}", iteration)
    g = 2 * correlate_spectrum(r, H)
    dout = np.stack([g.real.ravel(), g.imag.ravel()], axis=1)
    return loss, _backward(params, dout, acts, pre), field

# %% pts/csas/07_inr.pct.py 17
@dataclass
class Adam:
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)

    def step(self, params: MlpParams, grads: MlpParams) -> None:
        """Update *params* in place."""
        ps, gs = params.arrays(), grads.arrays()
        if not self.m:
            self.m = [np.zeros_like(p) for p in ps]
            self.v = [np.zeros_like(p) for p in ps]
        self.t += 1
        c1 = 1 - self.beta1**self.t
        c2 = 1 - self.beta2**self.t
        for p, g, m, v in zip(ps, gs, self.m, self.v):
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)

# %% pts/csas/07_inr.pct.py 19
@dataclass
class SinrResult(DeconvResult):
    params: MlpParams | None = None
    encoding: FourierEncoding | None = None

def init_sinr(cfg: SinrConfig) -> tuple[FourierEncoding, MlpParams]:
    """Seeded encoding and network for *cfg*."""
    rng = np.random.default_rng(cfg.seed)
    enc = make_encoding(cfg.features, cfg.kappa, rng)
    return enc, init_mlp(2 * cfg.features, cfg.hidden_width, rng)

# %% pts/csas/07_inr.pct.py 20
def sinr_deconvolve(
    I: ComplexImage,
    psf: Psf,
    cfg: SinrConfig = SinrConfig(),
    progress_every: int = 0,
    start: tuple[FourierEncoding, MlpParams] | None = None,
    snapshots: Iterable[int] = (),
) -> SinrResult:
    """Fit the coordinate network so that its output convolved with the PSF matches *I*."""
    keep = set(snapshots)
    shots: dict[int, np.ndarray] = {}
    if I.data.shape != psf.image.data.shape:
        raise ValueError(f"Size mismatch: image {I.data.shape} vs PSF {psf.image.data.shape}")
    enc, params = start if start is not None else init_sinr(cfg)
    n = I.grid.n
    scale = np.abs(I.data).max()
    if scale == 0:
        scale = 1.0
    target = I.data / scale
    features = encode(grid_coords(n), enc)
    H = kernel_spectrum(psf)
    opt = Adam(lr=cfg.learning_rate)

    trace: list[float] = []
    best_field, best_loss, best_k = None, np.inf, 0
    for k in range(cfg.iterations + 1):
        loss, grads, out = _loss_grads(params, features, H, target, k)
        trace.append(loss * scale**2)
        if loss > 1e6 * max(trace[0] / scale**2, np.finfo(float).tiny):
            raise DivergedError(f"SINR training diverged at iteration {k} (loss {loss:.3e})", trace, k)
        if loss < best_loss:
            best_field, best_loss, best_k = out, loss, k
        if k in keep:
            shots[k] = out * scale
        if progress_every and k % progress_every == 0:
            console.print(f"  [dim]iter {k}: loss {loss:.4e}[/dim]")
        if k == cfg.iterations:
            break
        opt.step(params, grads)
    return SinrResult(
        field=ComplexField(best_field * scale, I.grid),
        loss_trace=trace,
        iterations_run=cfg.iterations,
        best_iteration=best_k,
        snapshots=shots,
        params=params,
        encoding=enc,
    )

# %% pts/csas/07_inr.pct.py 22
def output_gradient_magnitude(params: MlpParams, enc: FourierEncoding, n: int) -> float:
    """Mean ‖∂(Re, Im)/∂(x, y)‖ of the network output over an n×n grid."""
    coords = grid_coords(n)
    proj = 2 * np.pi * enc.kappa * (coords @ enc.b_matrix.T)
    s, c = np.sin(proj), np.cos(proj)
    total = np.zeros(coords.shape[0])
    for d in range(2):
        dp = 2 * np.pi * enc.kappa * enc.b_matrix[:, d]
        a = np.concatenate([c, s], axis=1)
        t = np.concatenate([-s * dp, c * dp], axis=1)
        last = len(params.weights) - 1
        for i, (W, b) in enumerate(zip(params.weights, params.biases)):
            z = a @ W + b
            t = t @ W
            if i < last:
                mask = relu_mask(z)
                a = z * mask
                t = t * mask
        total += np.sum(t**2, axis=1)
    return float(np.mean(np.sqrt(total)))

# %% pts/csas/07_inr.pct.py 24
def pack_sinr(enc: FourierEncoding, params: MlpParams) -> tuple[np.ndarray, dict[str, str]]:
    """Flatten encoding and weights; shapes and κ go in the metadata."""
    arrays = [enc.b_matrix] + params.arrays()
    meta = {
        "kind": "sinr-checkpoint",
        "kappa": repr(enc.kappa),
        "shapes": ";".join("x".join(str(d) for d in a.shape) for a in arrays),
    }
    return np.concatenate([a.ravel() for a in arrays]), meta

def unpack_sinr(vector: np.ndarray, meta: dict[str, str]) -> tuple[FourierEncoding, MlpParams]:
    if meta.get("kind") != "sinr-checkpoint":
        raise ValueError("Tensor is not a SINR checkpoint")
    shapes = [tuple(int(d) for d in s.split("x")) for s in meta["shapes"].split(";")]
    sizes = [int(np.prod(s)) for s in shapes]
    if sum(sizes) != vector.size:
        raise ValueError(f"Checkpoint holds {vector.size} values, shapes need {sum(sizes)}")
    parts, offset = [], 0
    for shape, size in zip(shapes, sizes):
        parts.append(np.asarray(vector[offset:offset + size], dtype=float).reshape(shape))
        offset += size
    enc = FourierEncoding(parts[0], float(meta["kappa"]))
    return enc, MlpParams(parts[1::2], parts[2::2])
