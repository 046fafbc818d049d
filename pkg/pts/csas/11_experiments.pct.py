# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp experiments

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Experiments
#
# End-to-end drivers that the CLI commands delegate to: the imaging pipeline
# for a run configuration, method dispatch, the four-quadrant phase
# experiment, the specular-versus-diffuse comparison and the noise / κ /
# learning-rate sweep.

# %%
#|export
import itertools
import math
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from jinja2 import Environment, FileSystemLoader
from rich.console import Console

from csas.beamformer import ComplexImage, das, pulse_compress
from csas.config import METHODS, RunConfig, config_hash
from csas.deconv import (
    ComplexField, DeconvResult, bremen_from_config, fft_convolve, gd_deconvolve, inverse_filter, wiener,
)
from csas.geometry import SamplingCheck, SceneGrid, TransducerRing, build_ring, check_sampling
from csas.inr import FourierEncoding, MlpParams, sinr_deconvolve
from csas.io import (
    export_png_grid, load_image, load_scene, read_metrics_csv, read_tensor, save_field, write_metrics_csv,
)
from csas.metrics import MetricReport, QUADRANTS, evaluate_field, quadrant_psnr, quadrant_slices
from csas.psf import Psf, normalize_psf, simulate_psf
from csas.scenes import make_scene
from csas.signal import Waveform, lfm_chirp
from csas.simulator import PingSet, ScatterScene, add_noise, noise_variance_for_psnr, simulate

console = Console()

TEMPLATES_DIR = Path(__file__).resolve().parent / "templates"

_jinja_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
)

# %% [markdown]
# ## Pipeline pieces

# %%
#|export
def waveform_for(cfg: RunConfig) -> Waveform:
    wf = cfg.waveform
    return lfm_chirp(wf.f_start, wf.f_stop, wf.duration, wf.fs)

def ring_for(cfg: RunConfig) -> TransducerRing:
    return build_ring(cfg.ring.radius, cfg.ring.height, cfg.ring.n_angles)

def sampling_for(cfg: RunConfig, grid: SceneGrid) -> SamplingCheck:
    """Angular sampling check for the scene's circumscribed radius."""
    w = cfg.waveform
    lambda_min = cfg.medium.sound_speed / max(w.f_start, w.f_stop)
    return check_sampling(ring_for(cfg), lambda_min, grid.half_diagonal)

def scene_for(cfg: RunConfig) -> ScatterScene:
    """Scene from ``scene.path`` if set, else generated from the config."""
    if cfg.scene.path:
        return load_scene(cfg.scene.path)
    return make_scene(cfg.scene, cfg.seed)

# %%
#|export
def simulate_pings(cfg: RunConfig, scene: ScatterScene, workers: int = 1) -> PingSet:
    """Noiseless pings plus noise at the configured waveform PSNR.

    The PSNR is defined for pings scaled to unit peak, so the noise variance
    is scaled by the squared ping peak.
    """
    pings = simulate(scene, ring_for(cfg), waveform_for(cfg), cfg.medium.sound_speed, seed=cfg.seed, workers=workers)
    return noisy_pings(pings, cfg.noise.psnr_db, cfg.seed)

def noisy_pings(pings: PingSet, psnr_db: float, seed: int) -> PingSet:
    eta = noise_variance_for_psnr(psnr_db)
    if eta == 0:
        return pings
    peak = np.abs(pings.pings).max()
    return add_noise(pings, eta * (peak**2 if peak > 0 else 1.0), seed)

def form_image(cfg: RunConfig, pings: PingSet, grid: SceneGrid, workers: int = 1) -> ComplexImage:
    """Pulse compression followed by delay-and-sum."""
    compressed = pulse_compress(pings, waveform_for(cfg), cfg.beamform.oversample)
    return das(compressed, grid, cfg.medium.sound_speed, workers=workers)

def psf_for(cfg: RunConfig, grid: SceneGrid, workers: int = 1) -> Psf:
    """Normalized centered PSF for the run geometry."""
    psf = simulate_psf(ring_for(cfg), grid, waveform_for(cfg), cfg.medium.sound_speed, cfg.beamform.oversample, workers)
    return normalize_psf(psf)

def field_provenance(cfg: RunConfig) -> dict:
    """Metadata saved with every deconvolved field."""
    return dict(c=cfg.medium.sound_speed, seed=cfg.seed, f_start=cfg.waveform.f_start, f_stop=cfg.waveform.f_stop)

# %% [markdown]
# ## Method dispatch
#
# The DAS image is scaled to unit peak before any solver runs and the field is
# scaled back afterwards, so solver hyperparameters do not depend on the
# pipeline gain.

# %%
#|export
def run_method(
    method: str,
    I: ComplexImage,
    psf: Psf,
    cfg: RunConfig,
    progress_every: int = 0,
    snapshots: Iterable[int] = (),
    start: tuple[FourierEncoding, MlpParams] | None = None,
) -> DeconvResult:
    """Deconvolve *I* with the named method and the run's hyperparameters.

    *snapshots* lists iterations whose iterates are returned alongside the
    result; only iterative methods accept it. *start* resumes SINR training
    from a saved encoding and network.
    """
    if method not in METHODS:
        raise ValueError(f"Unknown method '{method}'. Valid methods: {', '.join(METHODS)}")
    if start is not None and method != "sinr":
        raise ValueError(f"Only the sinr method can resume from a checkpoint, not '{method}'")
    snapshots = sorted(set(snapshots))
    if snapshots and method in ("inverse", "wiener"):
        raise ValueError(f"Method '{method}' is not iterative and has no snapshots")
    if snapshots:
        limit = {"bremen": cfg.bremen.iterations, "sinr": cfg.sinr.iterations}.get(method, cfg.gd.iterations)
        if snapshots[0] < 0 or snapshots[-1] > limit:
            raise ValueError(f"Invalid snapshots {snapshots}: iterations must be in [0, {limit}] for {method}")
    scale = np.abs(I.data).max() or 1.0
    In = ComplexImage(I.data / scale, I.grid)
    if method == "inverse":
        result = DeconvResult(inverse_filter(In, psf, cfg.inverse.eps))
    elif method == "wiener":
        result = DeconvResult(wiener(In, psf, cfg.wiener.alpha))
    elif method == "gd":
        result = gd_deconvolve(In, psf, replace(cfg.gd, regularizer="none"), progress_every, snapshots)
    elif method == "gd-tv":
        result = gd_deconvolve(In, psf, replace(cfg.gd, regularizer="tv"), progress_every, snapshots)
    elif method == "gd-grad":
        result = gd_deconvolve(In, psf, replace(cfg.gd, regularizer="gradient"), progress_every, snapshots)
    elif method == "bremen":
        result = bremen_from_config(In, psf, cfg.bremen, progress_every, snapshots)
    else:
        result = sinr_deconvolve(In, psf, cfg.sinr, progress_every, start, snapshots)
    result.field = ComplexField(result.field.data * scale, I.grid)
    result.snapshots = {k: v * scale for k, v in result.snapshots.items()}
    result.loss_trace = [v * scale**2 for v in result.loss_trace]
    return result

# %% [markdown]
# ## Four-quadrant experiment
#
# A scatterer lattice whose top-right and bottom-left quadrants echo with
# zero phase and the other two with a quarter-cycle shift. A real-constrained
# fit can only explain the real quadrants; a complex fit explains all four.
# Residual fractions are `‖(σ̃∗h − I)_q‖² / ‖I_q‖²` per quadrant `q`.
#
# With `real_only` every quadrant echoes with zero phase. The imaginary part
# of that image is only the spatial variation of the PSF, which no centered
# kernel explains, so both runs are scored on the real part of the residual
# `‖Re(σ̃∗h − I)_q‖² / ‖Re I_q‖²`.

# %%
#|export
@dataclass
class QuadrantRun:
    name: str
    field: ComplexField
    residual: float
    quadrant_residual: dict[str, float]
    quadrant_psnr: dict[str, float]

@dataclass
class QuadrantReport:
    truth: ScatterScene
    image: ComplexImage
    das_quadrant_psnr: dict[str, float]
    runs: dict[str, QuadrantRun] = field(default_factory=dict)
    real_only: bool = False

    @property
    def residual_ratio(self) -> float:
        """Complex residual over real-constrained residual."""
        return self.runs["complex"].residual / self.runs["real"].residual

# %%
#|exporti
def _residuals(x: ComplexField, psf: Psf, I: ComplexImage, real_part: bool = False) -> tuple[float, dict[str, float]]:
    target = I.data.real if real_part else I.data
    r = fft_convolve(x, psf).data
    r = (r.real if real_part else r) - target
    total = float(np.sum(np.abs(r) ** 2) / np.sum(np.abs(target) ** 2))
    per = {}
    for name, (rs, cs) in quadrant_slices(I.grid.n).items():
        per[name] = float(np.sum(np.abs(r[rs, cs]) ** 2) / np.sum(np.abs(target[rs, cs]) ** 2))
    return total, per

# %%
#|export
def quadrant_experiment(cfg: RunConfig, real_only: bool = False, workers: int = 1, progress_every: int = 0) -> QuadrantReport:
    """Deconvolve the quadrant scene with complex and real-constrained fields."""
    scene = make_scene(replace(cfg.scene, kind="quadrants"), cfg.seed)
    if real_only:
        scene = replace(scene, phase=np.zeros_like(scene.sigma))
    pings = simulate_pings(cfg, scene, workers)
    I = form_image(cfg, pings, scene.grid, workers)
    psf = psf_for(cfg, scene.grid, workers)
    qcfg = replace(cfg, gd=replace(cfg.gd, iterations=cfg.quadrant.iterations), sinr=replace(cfg.sinr, iterations=cfg.quadrant.iterations))
    report = QuadrantReport(scene, I, quadrant_psnr(I.data, scene.sigma), real_only=real_only)

    complex_method = "sinr" if cfg.quadrant.method == "sinr" else "gd"
    real_cfg = replace(qcfg, gd=replace(qcfg.gd, constraint="real"))
    for name, method, run_cfg in (("complex", complex_method, qcfg), ("real", "gd", real_cfg)):
        result = run_method(method, I, psf, run_cfg, progress_every)
        total, per = _residuals(result.field, psf, I, real_part=real_only)
        report.runs[name] = QuadrantRun(name, result.field, total, per, quadrant_psnr(result.field.data, scene.sigma))
    return report

# %%
#|export
def write_quadrant_report(report: QuadrantReport, out_dir: Path, floor_db: float = -60.0) -> None:
    """Side-by-side PNG (DAS, complex, real) and the per-quadrant residual CSV."""
    out_dir.mkdir(parents=True, exist_ok=True)
    images = [report.image] + [ComplexImage(r.field.data, report.image.grid) for r in report.runs.values()]
    export_png_grid(images, floor_db, out_dir / "quadrants.png")
    lines = ["run,quadrant,residual_fraction,psnr_db"]
    lines += [f"das,{q},,{report.das_quadrant_psnr[q]!r}" for q in QUADRANTS]
    for run in report.runs.values():
        lines += [f"{run.name},{q},{run.quadrant_residual[q]!r},{run.quadrant_psnr[q]!r}" for q in QUADRANTS]
        lines.append(f"{run.name},all,{run.residual!r},")
    (out_dir / "quadrant_residuals.csv").write_text("\n".join(lines) + "\n")

# %% [markdown]
# ## Specular versus diffuse
#
# Both scenes share the `scene.base` magnitude. The specular scene carries a
# structured phase (uniform per grid cell); the diffuse scene a random phase
# per scatterer. The gain is the deconvolution PSNR minus the DAS PSNR.
#
# The ring never observes the lowest wavenumbers, so only a prior can refill
# them. With `base = "uniform"` and a strong TV weight (see
# `configs/specular_diffuse.toml`) the piecewise-constant phase-grid field is
# recovered while the random-phase field is not.

# %%
#|export
@dataclass(frozen=True)
class ScatteringComparison:
    scene: str
    das_psnr_db: float
    deconv_psnr_db: float

    @property
    def gain_db(self) -> float:
        return self.deconv_psnr_db - self.das_psnr_db

def specular_vs_diffuse(cfg: RunConfig, method: str | None = None, workers: int = 1) -> dict[str, ScatteringComparison]:
    method = method or cfg.method.name
    out = {}
    for kind in ("phase-grid", "diffuse"):
        scene = make_scene(replace(cfg.scene, kind=kind), cfg.seed)
        pings = simulate_pings(cfg, scene, workers)
        I = form_image(cfg, pings, scene.grid, workers)
        psf = psf_for(cfg, scene.grid, workers)
        result = run_method(method, I, psf, cfg)
        radius = cfg.method.mask_radius
        das_report = evaluate_field(I.data, scene.sigma, "das", kind, radius)
        dec_report = evaluate_field(result.field.data, scene.sigma, method, kind, radius)
        out[kind] = ScatteringComparison(kind, das_report.psnr_db, dec_report.psnr_db)
    return out

# %% [markdown]
# ## Sweep
#
# A Cartesian grid of noise levels × methods, plus SINR cells over κ and the
# learning rate when those lists are set. Each cell writes its own directory
# with the field and a one-row metrics CSV; a cell whose metrics file exists
# is not recomputed. Each field records a hash of the configuration that
# produced it, and resuming over cells with a different hash is refused.

# %%
#|export
@dataclass(frozen=True)
class SweepCell:
    noise_psnr_db: float
    method: str
    kappa: float | None = None
    learning_rate: float | None = None

    @property
    def label(self) -> str:
        if self.kappa is None and self.learning_rate is None:
            return self.method
        return f"{self.method}[k={self.kappa:g},lr={self.learning_rate:g}]"

    @property
    def cell_id(self) -> str:
        noise = "inf" if math.isinf(self.noise_psnr_db) else f"{self.noise_psnr_db:g}"
        tag = self.label.replace("[", "_").replace("]", "").replace(",", "_").replace("=", "")
        return f"noise{noise}_{tag}"

def sweep_cells(cfg: RunConfig) -> list[SweepCell]:
    s = cfg.sweep
    cells = [SweepCell(float(p), m) for p in s.noise_psnr_db for m in s.methods]
    if s.kappas or s.learning_rates:
        kappas = s.kappas or [cfg.sinr.kappa]
        lrs = s.learning_rates or [cfg.sinr.learning_rate]
        cells += [
            SweepCell(float(p), "sinr", float(k), float(lr))
            for p, k, lr in itertools.product(s.noise_psnr_db, kappas, lrs)
        ]
    return cells

# %%
#|export
@dataclass
class SweepResult:
    reports: list[MetricReport]
    computed: list[str]
    skipped: list[str]

def _cell_config(cfg: RunConfig, cell: SweepCell) -> RunConfig:
    if cell.kappa is None:
        return cfg
    return replace(cfg, sinr=replace(cfg.sinr, kappa=cell.kappa, learning_rate=cell.learning_rate))

def cell_hash(cfg: RunConfig, cell: SweepCell) -> str:
    """Hash of everything that determines one cell's result."""
    c = _cell_config(cfg, cell)
    c = replace(c, method=replace(c.method, name=cell.method), noise=replace(c.noise, psnr_db=cell.noise_psnr_db))
    return config_hash(c, exclude=("output_dir", "sweep"))

def _stale_cells(cfg: RunConfig, cells: list[SweepCell], out_dir: Path) -> list[str]:
    stale = []
    for cell in cells:
        cell_dir = out_dir / "cells" / cell.cell_id
        if not (cell_dir / "metrics.csv").exists():
            continue
        field_path = cell_dir / "field.csas"
        saved = read_tensor(field_path)[1].get("config_hash") if field_path.exists() else None
        if saved != cell_hash(cfg, cell):
            stale.append(cell.cell_id)
    return stale

def run_sweep(cfg: RunConfig, out_dir: Path, workers: int = 1, verbose: bool = False) -> SweepResult:
    """Run (or resume) the sweep and write CSV, PNG grid and Markdown report."""
    out_dir = Path(out_dir)
    cells = sweep_cells(cfg)
    if not cells:
        raise ValueError("Sweep has no cells: set sweep.methods, sweep.kappas or sweep.learning_rates")
    stale = _stale_cells(cfg, cells, out_dir)
    if stale:
        raise ValueError(
            f"Sweep cells computed under a different configuration: {', '.join(stale)}. "
            f"Delete them from {out_dir / 'cells'} or choose another output_dir"
        )
    scene = scene_for(cfg)
    grid = scene.grid
    clean = simulate(scene, ring_for(cfg), waveform_for(cfg), cfg.medium.sound_speed, workers=workers)
    psf = psf_for(cfg, grid, workers)
    scene_name = cfg.scene.kind

    images: dict[float, ComplexImage] = {}
    for p in sorted({c.noise_psnr_db for c in cells}, reverse=True):
        images[p] = form_image(cfg, noisy_pings(clean, p, cfg.seed), grid, workers)

    def run_cell(cell: SweepCell) -> tuple[MetricReport, bool]:
        cell_dir = out_dir / "cells" / cell.cell_id
        metrics_path = cell_dir / "metrics.csv"
        if metrics_path.exists():
            return read_metrics_csv(metrics_path)[0], False
        result = run_method(cell.method, images[cell.noise_psnr_db], psf, _cell_config(cfg, cell))
        report = evaluate_field(
            result.field.data, scene.sigma, cell.label, scene_name, cfg.method.mask_radius, cell.noise_psnr_db,
        )
        save_field(
            cell_dir / "field.csas", result.field, cell.label,
            config_hash=cell_hash(cfg, cell), **field_provenance(cfg),
        )
        write_metrics_csv(metrics_path, [report])
        if verbose:
            console.print(f"  [dim]{cell.cell_id}: {report.psnr_db:.2f} dB[/dim]")
        return report, True

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_cell, cells))
    else:
        outcomes = [run_cell(c) for c in cells]

    reports = [r for r, _ in outcomes]
    computed = [c.cell_id for c, (_, fresh) in zip(cells, outcomes) if fresh]
    skipped = [c.cell_id for c, (_, fresh) in zip(cells, outcomes) if not fresh]
    write_metrics_csv(out_dir / "sweep.csv", reports)
    fields = [load_image(out_dir / "cells" / c.cell_id / "field.csas", kind="field")[0] for c in cells]
    export_png_grid(fields, cfg.beamform.floor_db, out_dir / "sweep.png", cols=min(len(cells), 6))
    write_sweep_report(out_dir / "sweep.md", cfg, cells, reports)
    return SweepResult(reports, computed, skipped)

# %%
#|export
def write_sweep_report(path: Path, cfg: RunConfig, cells: list[SweepCell], reports: list[MetricReport]) -> None:
    """Render the Markdown summary of a sweep."""
    best: dict[str, MetricReport] = {}
    for r in reports:
        key = "inf" if math.isinf(r.noise_psnr_db) else f"{r.noise_psnr_db:g}"
        if key not in best or r.psnr_db > best[key].psnr_db:
            best[key] = r
    text = _jinja_env.get_template("sweep_report.md.j2").render(
        scene=cfg.scene, ring=cfg.ring, waveform=cfg.waveform, seed=cfg.seed,
        rows=list(zip(cells, reports)), best=best,
    )
    Path(path).write_text(text)
