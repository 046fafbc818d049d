# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/10_scenes.pct.py

__all__ = ['base_sigma', 'lattice_sigma', 'make_scene', 'phase_grid', 'ripples_sigma', 'scene_grid', 'sparse_sigma']

# %% pts/csas/10_scenes.pct.py 3
import numpy as np

from .config import SCENE_BASES, SceneConfig
from .geometry import SceneGrid, build_grid
from .metrics import circular_mask
from .simulator import ScatterScene, apply_random_phase, quadrant_phase

# %% pts/csas/10_scenes.pct.py 5
def ripples_sigma(n: int, seed: int, components: int = 6) -> np.ndarray:
    """Superposed oriented sinusoids scaled to [0, 1], circularly cropped."""
    rng = np.random.default_rng(seed)
    t = np.linspace(-0.5, 0.5, n)
    X, Y = np.meshgrid(t, t, indexing="xy")
    tex = np.zeros((n, n))
    for _ in range(components):
        freq = rng.uniform(2.0, 8.0)
        theta = rng.uniform(0, np.pi)
        psi = rng.uniform(0, 2 * np.pi)
        tex += rng.uniform(0.5, 1.0) * np.cos(2 * np.pi * freq * (X * np.cos(theta) + Y * np.sin(theta)) + psi)
    tex = (tex - tex.min()) / (tex.max() - tex.min())
    return tex * circular_mask(n)

def sparse_sigma(n: int, count: int, seed: int) -> np.ndarray:
    """*count* scatterers at distinct pixels inside the mask, σ ∈ (0.5, 1]."""
    rng = np.random.default_rng(seed)
    inside = np.flatnonzero(circular_mask(n, n / 2 - 2))
    if count > inside.size:
        raise ValueError(f"Cannot place {count} scatterers in {inside.size} pixels")
    picks = np.sort(rng.choice(inside, size=count, replace=False))
    sigma = np.zeros(n * n)
    sigma[picks] = 1.0 - rng.uniform(0.0, 0.5, size=count)
    return sigma.reshape(n, n)

def lattice_sigma(n: int, spacing: int) -> np.ndarray:
    """Unit scatterers every *spacing* pixels, offset half a spacing from the edge."""
    if spacing < 1:
        raise ValueError(f"Invalid spacing {spacing}: must be >= 1")
    sigma = np.zeros((n, n))
    start = spacing // 2
    sigma[start::spacing, start::spacing] = 1.0
    return sigma

# %% pts/csas/10_scenes.pct.py 7
def phase_grid(n: int, cells: int) -> np.ndarray:
    """Cell (i, j) of a cells×cells partition carries phase 2π(i·cells + j)/cells²."""
    if not 1 <= cells <= n:
        raise ValueError(f"Invalid cells {cells}: must be in [1, {n}]")
    idx = np.arange(n) * cells // n
    ci, cj = np.meshgrid(idx, idx, indexing="ij")
    return 2 * np.pi * (ci * cells + cj) / cells**2

# %% pts/csas/10_scenes.pct.py 9
def base_sigma(kind: str, n: int, seed: int, count: int = 40) -> np.ndarray:
    if kind == "ripples":
        return ripples_sigma(n, seed)
    if kind == "sparse":
        return sparse_sigma(n, count, seed)
    if kind == "uniform":
        return circular_mask(n).astype(float)
    raise ValueError(f"Invalid base pattern '{kind}'. Valid: {', '.join(SCENE_BASES)}")

def make_scene(cfg: SceneConfig, seed: int) -> ScatterScene:
    """Generate the scene described by *cfg*."""
    grid = build_grid(cfg.n, cfg.extent, cfg.z0)
    n = cfg.n
    if cfg.kind == "empty":
        return ScatterScene(grid, np.zeros((n, n)))
    if cfg.kind == "ripples":
        return ScatterScene(grid, ripples_sigma(n, seed))
    if cfg.kind == "sparse":
        return ScatterScene(grid, sparse_sigma(n, cfg.count, seed))
    if cfg.kind == "quadrants":
        return ScatterScene(grid, lattice_sigma(n, cfg.spacing), quadrant_phase(n))
    if cfg.kind == "diffuse":
        return apply_random_phase(ScatterScene(grid, base_sigma(cfg.base, n, seed, cfg.count)), seed + 1)
    if cfg.kind == "phase-grid":
        return ScatterScene(grid, base_sigma(cfg.base, n, seed, cfg.count), phase_grid(n, cfg.cells))
    raise ValueError(f"Unknown scene kind '{cfg.kind}'")

def scene_grid(cfg: SceneConfig) -> SceneGrid:
    return build_grid(cfg.n, cfg.extent, cfg.z0)
