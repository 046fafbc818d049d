# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp cli

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # CLI
#
# Command-line interface for csas. Every command takes `--config FILE` plus
# any number of `--section.key value` overrides and writes its artifacts under
# the configured `output_dir`.
#
# Exit codes: 0 on success, 2 for configuration and usage errors, 3 for
# runtime failures (divergence, non-finite losses, I/O).

# %%
#|export
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import numpy as np
import typer
from rich.console import Console
from rich.table import Table

from csas.config import RunConfig, apply_overrides, load_run_config, parse_overrides, save_run_config, worker_count
from csas.beamformer import ComplexImage
from csas.experiments import (
    field_provenance, form_image, psf_for, quadrant_experiment, ring_for, run_method, run_sweep, sampling_for,
    scene_for, simulate_pings, specular_vs_diffuse, waveform_for, write_quadrant_report,
)
from csas.inr import SinrResult
from csas.io import (
    export_phase_png, export_png, export_png_grid, load_checkpoint, load_image, load_pings, load_psf, load_scene,
    save_checkpoint, save_field, save_image, save_pings, save_psf, save_scene, write_metrics_csv, write_tensor,
)
from csas.metrics import MetricReport, QUADRANTS, evaluate_field
from csas.psf import (
    center_position, fit_centered_psf_params, imag_energy_fraction, imag_real_ratio, main_lobe_width,
    simulate_offcenter_psf, simulate_psf,
)

# %%
#|export
_verbose = False
_quiet = False

def _version_callback(value: bool):
    if value:
        from csas import __version__
        typer.echo(f"csas {__version__}")
        raise typer.Exit()

def _main_callback(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Show solver progress"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Suppress non-essential output"),
    version: bool = typer.Option(False, "--version", callback=_version_callback, is_eager=True, help="Show version"),
):
    global _verbose, _quiet
    _verbose = verbose
    _quiet = quiet

app = typer.Typer(
    name="csas",
    help="Circular SAS simulation, beamforming and coherent deconvolution.",
    no_args_is_help=True,
    callback=_main_callback,
)
console = Console()

OVERRIDES = {"allow_extra_args": True, "ignore_unknown_options": True}

# %% [markdown]
# ## Shared helpers

# %%
#|export
@contextmanager
def _errors():
    """Map library exceptions onto the exit-code contract."""
    try:
        yield
    except typer.Exit:
        raise
    except ValueError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(code=2)
    except (RuntimeError, ArithmeticError, OSError) as e:
        console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(code=3)

def _load(ctx: typer.Context, config: Path | None) -> tuple[RunConfig, Path]:
    cfg = load_run_config(config) if config else RunConfig()
    cfg = apply_overrides(cfg, parse_overrides(list(ctx.args)))
    out = Path(cfg.output_dir)
    save_run_config(cfg, out / "run_config.toml")
    return cfg, out

def _say(msg: str) -> None:
    if not _quiet:
        console.print(msg)

def _progress() -> int:
    return 100 if _verbose else 0

def _warn_sampling(cfg: RunConfig, grid) -> None:
    check = sampling_for(cfg, grid)
    if not check.satisfied and not _quiet:
        ring = ring_for(cfg)
        console.print(
            f"[yellow]Warning:[/yellow] angular step {np.degrees(ring.dtheta):.3f}° exceeds "
            f"the sampling bound {np.degrees(check.max_dtheta):.3f}° for this scene"
        )

def _metrics_table(reports: list[MetricReport]) -> Table:
    table = Table()
    table.add_column("Scene")
    table.add_column("Method")
    table.add_column("Noise PSNR (dB)")
    table.add_column("PSNR (dB)")
    table.add_column("SSIM")
    for r in reports:
        table.add_row(r.scene, r.method, f"{r.noise_psnr_db:g}", f"{r.psnr_db:.2f}", f"{r.ssim:.4f}")
    return table

_ConfigOpt = typer.Option(None, "--config", "-c", help="Run configuration TOML")

# %%
#|export
from csas import __version__

@app.command()
def version():
    """Show the csas version."""
    typer.echo(f"csas {__version__}")

# %% [markdown]
# ## Scene and measurement commands

# %%
#|export
@app.command("scene-gen", context_settings=OVERRIDES)
def scene_gen(ctx: typer.Context, config: Optional[Path] = _ConfigOpt):
    """Generate a procedural scene (kind, size and seed from the config)."""
    with _errors():
        cfg, out = _load(ctx, config)
        scene = scene_for(cfg)
        save_scene(out / "scene.csas", scene, scene_kind=cfg.scene.kind, seed=cfg.seed)
        export_png(ComplexImage(scene.amplitudes, scene.grid), cfg.beamform.floor_db, out / "scene.png")
    _say(f"[bold green]Wrote {cfg.scene.kind} scene[/bold green] ({cfg.scene.n}×{cfg.scene.n}) to {out / 'scene.csas'}")

# %%
#|export
@app.command(context_settings=OVERRIDES)
def simulate(ctx: typer.Context, config: Optional[Path] = _ConfigOpt):
    """Simulate the ping set for the configured scene."""
    with _errors():
        cfg, out = _load(ctx, config)
        scene = scene_for(cfg)
        _warn_sampling(cfg, scene.grid)
        _say(f"[bold]Simulating[/bold] {cfg.ring.n_angles} pings of a {cfg.scene.kind} scene")
        pings = simulate_pings(cfg, scene, worker_count())
        save_scene(out / "scene.csas", scene, scene_kind=cfg.scene.kind, seed=cfg.seed)
        w = cfg.waveform
        save_pings(
            out / "pings.csas", pings,
            f_start=w.f_start, f_stop=w.f_stop, duration=w.duration,
            c=cfg.medium.sound_speed, seed=cfg.seed, noise_psnr_db=cfg.noise.psnr_db,
        )
    _say(f"  [dim]{pings.pings.shape[0]} × {pings.n_t} samples, t0 = {pings.t0 * 1e3:.3f} ms[/dim]")
    _say(f"[bold green]Wrote {out / 'pings.csas'}[/bold green]")

# %%
#|export
@app.command(context_settings=OVERRIDES)
def beamform(
    ctx: typer.Context,
    config: Optional[Path] = _ConfigOpt,
    pings: Optional[Path] = typer.Option(None, "--pings", help="Ping file (simulated from the config if omitted)"),
):
    """Pulse-compress and delay-and-sum the pings into a complex image."""
    with _errors():
        cfg, out = _load(ctx, config)
        grid = scene_for(cfg).grid
        if pings:
            ps, _ = load_pings(pings)
        else:
            ps = simulate_pings(cfg, scene_for(cfg), worker_count())
        img = form_image(cfg, ps, grid, worker_count())
        save_image(out / "image.csas", img)
        export_png(img, cfg.beamform.floor_db, out / "das.png")
    _say(f"[bold green]Wrote {out / 'image.csas'}[/bold green]")

# %%
#|export
def _parse_position(text: str) -> tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"Invalid --position '{text}': expected x,y in meters")
    return x, y

def _parse_iterations(text: str) -> list[int]:
    try:
        return sorted({int(v) for v in text.split(",") if v.strip()})
    except ValueError:
        raise ValueError(f"Invalid --snapshots '{text}': expected comma-separated iterations")

def _export_psf(p, stem: str, out: Path, floor_db: float) -> None:
    save_psf(out / f"{stem}.csas", p)
    export_png(p.image, floor_db, out / f"{stem}.png")
    export_phase_png(p.image, out / f"{stem}_phase.png")

@app.command(context_settings=OVERRIDES)
def psf(
    ctx: typer.Context,
    config: Optional[Path] = _ConfigOpt,
    fit: bool = typer.Option(False, "--fit", help="Fit the analytic spectrum parameters"),
    position: Optional[str] = typer.Option(None, "--position", help="Also image a scatterer at x,y (meters)"),
    z_offset: Optional[float] = typer.Option(None, "--z-offset", help="Also image a scatterer this far above z0 (meters)"),
):
    """Simulate the PSF of the configured geometry, centered and optionally off-center or off-plane.

    Each PSF is written as a tensor plus magnitude and phase PNGs.
    """
    with _errors():
        cfg, out = _load(ctx, config)
        grid = scene_for(cfg).grid
        ring, w, c, workers = ring_for(cfg), waveform_for(cfg), cfg.medium.sound_speed, worker_count()
        raw = simulate_psf(ring, grid, w, c, cfg.beamform.oversample, workers)
        _export_psf(psf_for(cfg, grid, workers), "psf", out, cfg.beamform.floor_db)
        cases = {"centered": raw}
        x0, y0, z0 = center_position(grid)
        if position is not None:
            x0, y0 = _parse_position(position)
            cases["off-center"] = simulate_offcenter_psf(ring, grid, w, c, (x0, y0, z0), cfg.beamform.oversample, workers)
            _export_psf(cases["off-center"], "psf_offcenter", out, cfg.beamform.floor_db)
        if z_offset is not None:
            cases["off-plane"] = simulate_offcenter_psf(
                ring, grid, w, c, (x0, y0, z0 + z_offset), cfg.beamform.oversample, workers,
            )
            _export_psf(cases["off-plane"], "psf_offplane", out, cfg.beamform.floor_db)
        table = Table()
        table.add_column("Quantity")
        for name in cases:
            table.add_column(name)
        table.add_row("max|Im| / max|Re|", *[f"{imag_real_ratio(p):.4f}" for p in cases.values()])
        table.add_row("Im energy", *[f"{imag_energy_fraction(p):.4f}" for p in cases.values()])
        table.add_row("-6 dB width (px)", *[f"{main_lobe_width(p):.3f}" for p in cases.values()])
        if fit:
            params = fit_centered_psf_params(raw)
            table.add_row("a0", f"{params.a0:.4g}")
            table.add_row("sigma", f"{params.sigma_w:.4g}")
            table.add_row("k", f"{params.k:.4g}")
    if not _quiet:
        console.print(table)
    _say(f"[bold green]Wrote {len(cases)} PSF(s)[/bold green] to {out}")

# %% [markdown]
# ## Deconvolution and evaluation

# %%
#|export
@app.command(context_settings=OVERRIDES)
def deconvolve(
    ctx: typer.Context,
    config: Optional[Path] = _ConfigOpt,
    image: Optional[Path] = typer.Option(None, "--image", help="DAS image file (formed from the config if omitted)"),
    psf_file: Optional[Path] = typer.Option(None, "--psf", help="PSF file (simulated if omitted)"),
    resume: Optional[Path] = typer.Option(None, "--resume", help="SINR checkpoint to start from"),
    snapshots: Optional[str] = typer.Option(
        None, "--snapshots", help="Comma-separated iterations to save as a snapshots.png grid",
    ),
):
    """Deconvolve the DAS image with ``method.name`` and score it against the scene."""
    with _errors():
        cfg, out = _load(ctx, config)
        method = cfg.method.name
        if resume and method != "sinr":
            raise ValueError(f"--resume needs method.name = sinr, got '{method}'")
        wanted = _parse_iterations(snapshots) if snapshots else []
        scene = scene_for(cfg)
        workers = worker_count()
        if image:
            I, _ = load_image(image)
        else:
            I = form_image(cfg, simulate_pings(cfg, scene, workers), scene.grid, workers)
        p = load_psf(psf_file) if psf_file else psf_for(cfg, scene.grid, workers)
        start = load_checkpoint(resume) if resume else None
        _say(f"[bold]Deconvolving[/bold] with {method}")
        result = run_method(method, I, p, cfg, _progress(), wanted, start)

        save_field(out / f"field_{method}.csas", result.field, method, **field_provenance(cfg))
        export_png(result.field, cfg.beamform.floor_db, out / f"{method}.png")
        if wanted:
            shots = [ComplexImage(result.snapshots[k], I.grid) for k in wanted]
            export_png_grid(shots, cfg.beamform.floor_db, out / "snapshots.png", cols=min(len(shots), 6))
        if result.loss_trace:
            write_tensor(out / f"loss_{method}.csas", np.asarray(result.loss_trace), {"kind": "loss", "method": method})
        if isinstance(result, SinrResult):
            save_checkpoint(out / "checkpoint_sinr.csas", result.encoding, result.params, seed=cfg.sinr.seed)
        radius = cfg.method.mask_radius
        reports = [
            evaluate_field(I.data, scene.sigma, "das", cfg.scene.kind, radius, cfg.noise.psnr_db),
            evaluate_field(result.field.data, scene.sigma, method, cfg.scene.kind, radius, cfg.noise.psnr_db),
        ]
        write_metrics_csv(out / "metrics.csv", reports)
    if not _quiet:
        console.print(_metrics_table(reports))
    _say(f"[bold green]Wrote {out / f'field_{method}.csas'}[/bold green]")

# %%
#|export
@app.command("eval", context_settings=OVERRIDES)
def eval_cmd(
    ctx: typer.Context,
    config: Optional[Path] = _ConfigOpt,
    field: Path = typer.Option(..., "--field", help="Field or image file to score"),
    scene: Optional[Path] = typer.Option(None, "--scene", help="Ground-truth scene file (generated if omitted)"),
):
    """Score a saved field against ground truth (PSNR, SSIM)."""
    with _errors():
        cfg, out = _load(ctx, config)
        truth = load_scene(scene) if scene else scene_for(cfg)
        try:
            est, meta = load_image(field, kind="field")
        except ValueError:
            est, meta = load_image(field, kind="image")
        method = meta.get("method", "das")
        report = evaluate_field(est.data, truth.sigma, method, cfg.scene.kind, cfg.method.mask_radius, cfg.noise.psnr_db)
        write_metrics_csv(out / "eval.csv", [report])
    if not _quiet:
        console.print(_metrics_table([report]))

# %% [markdown]
# ## Experiments

# %%
#|export
@app.command("quadrant-demo", context_settings=OVERRIDES)
def quadrant_demo(
    ctx: typer.Context,
    config: Optional[Path] = _ConfigOpt,
    real_only: bool = typer.Option(False, "--real-only", help="Give every quadrant zero phase"),
):
    """Compare complex and real-constrained deconvolution on the quadrant scene."""
    with _errors():
        cfg, out = _load(ctx, config)
        _warn_sampling(cfg, scene_for(cfg).grid)
        report = quadrant_experiment(cfg, real_only=real_only, workers=worker_count(), progress_every=_progress())
        write_quadrant_report(report, out, cfg.beamform.floor_db)
    if not _quiet:
        table = Table()
        table.add_column("Run")
        for q in QUADRANTS:
            table.add_column(q)
        table.add_column("Total")
        for run in report.runs.values():
            table.add_row(run.name, *[f"{run.quadrant_residual[q]:.3f}" for q in QUADRANTS], f"{run.residual:.4f}")
        console.print(table)
        console.print(f"Residual ratio (complex / real): [bold]{report.residual_ratio:.4f}[/bold]")
        if report.real_only:
            console.print("[dim]Zero-phase scene: residuals are measured on the real part of the image[/dim]")

# %%
#|export
@app.command("specular-diffuse", context_settings=OVERRIDES)
def specular_diffuse(ctx: typer.Context, config: Optional[Path] = _ConfigOpt):
    """Deconvolution gain over DAS for structured-phase vs random-phase scenes."""
    with _errors():
        cfg, out = _load(ctx, config)
        results = specular_vs_diffuse(cfg, workers=worker_count())
        lines = ["scene,das_psnr_db,deconv_psnr_db,gain_db"]
        lines += [f"{r.scene},{r.das_psnr_db!r},{r.deconv_psnr_db!r},{r.gain_db!r}" for r in results.values()]
        (out / "specular_diffuse.csv").write_text("\n".join(lines) + "\n")
    if not _quiet:
        table = Table()
        table.add_column("Scene")
        table.add_column("DAS PSNR (dB)")
        table.add_column(f"{cfg.method.name} PSNR (dB)")
        table.add_column("Gain (dB)")
        for r in results.values():
            table.add_row(r.scene, f"{r.das_psnr_db:.2f}", f"{r.deconv_psnr_db:.2f}", f"{r.gain_db:.2f}")
        console.print(table)

# %%
#|export
@app.command(context_settings=OVERRIDES)
def sweep(ctx: typer.Context, config: Optional[Path] = _ConfigOpt):
    """Run (or resume) the noise / method / κ / learning-rate sweep."""
    with _errors():
        cfg, out = _load(ctx, config)
        result = run_sweep(cfg, out, workers=worker_count(), verbose=_verbose)
    if not _quiet:
        console.print(_metrics_table(result.reports))
    _say(f"  [dim]{len(result.computed)} computed, {len(result.skipped)} resumed[/dim]")
    _say(f"[bold green]Wrote {out / 'sweep.csv'}[/bold green]")

# %%
#|export
def app_main() -> None:
    """Entry point for the csas CLI."""
    try:
        app()
    except ValueError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise SystemExit(2)
