# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/02_geometry.pct.py

__all__ = ['SamplingCheck', 'SceneGrid', 'TransducerRing', 'build_grid', 'build_ring', 'check_sampling']

# %% pts/csas/02_geometry.pct.py 3
from dataclasses import dataclass

import numpy as np

# %% pts/csas/02_geometry.pct.py 5
@dataclass(frozen=True)
class SceneGrid:
    n: int
    extent: float
    z0: float = 0.0

    @property
    def pitch(self) -> float:
        return self.extent / (self.n - 1)

    @property
    def coords(self) -> np.ndarray:
        return (np.arange(self.n) - (self.n - 1) / 2) * self.pitch

    @property
    def half_diagonal(self) -> float:
        return self.extent / np.sqrt(2)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (X, Y) pixel coordinate arrays of shape (n, n)."""
        c = self.coords
        return np.meshgrid(c, c, indexing="xy")

    def pixel_of(self, x: float, y: float) -> tuple[int, int]:
        """Nearest (row, col) for a physical position."""
        i = int(round(y / self.pitch + (self.n - 1) / 2))
        j = int(round(x / self.pitch + (self.n - 1) / 2))
        return i, j

# %% pts/csas/02_geometry.pct.py 6
def build_grid(n: int, extent: float, z0: float = 0.0) -> SceneGrid:
    """Centered n×n grid spanning [−extent/2, extent/2] on both axes."""
    if n < 2:
        raise ValueError(f"Invalid grid size {n}: must be >= 2")
    if not extent > 0:
        raise ValueError(f"Invalid extent {extent}: must be > 0")
    return SceneGrid(n=int(n), extent=float(extent), z0=float(z0))

# %% pts/csas/02_geometry.pct.py 8
@dataclass(frozen=True)
class TransducerRing:
    radius: float
    height: float
    angles: np.ndarray

    @property
    def n_angles(self) -> int:
        return self.angles.size

    @property
    def dtheta(self) -> float:
        return 2 * np.pi / self.n_angles

    @property
    def positions(self) -> np.ndarray:
        """(n_angles, 3) transducer coordinates."""
        return np.stack([
            self.radius * np.cos(self.angles),
            self.radius * np.sin(self.angles),
            np.full(self.n_angles, self.height),
        ], axis=1)

    def key(self) -> tuple:
        return (self.radius, self.height, self.angles.tobytes())

# %% pts/csas/02_geometry.pct.py 9
def build_ring(radius: float, height: float, n_angles: int) -> TransducerRing:
    """Uniformly spaced transducer positions on a circle at ``height``."""
    if n_angles < 1:
        raise ValueError(f"Invalid n_angles {n_angles}: must be >= 1")
    if not radius > 0:
        raise ValueError(f"Invalid radius {radius}: must be > 0")
    angles = 2 * np.pi * np.arange(n_angles) / n_angles
    return TransducerRing(radius=float(radius), height=float(height), angles=angles)

# %% pts/csas/02_geometry.pct.py 11
@dataclass(frozen=True)
class SamplingCheck:
    satisfied: bool
    max_dtheta: float

def check_sampling(ring: TransducerRing, lambda_min: float, r_scene: float) -> SamplingCheck:
    """Compare the ring's angular step to the ``λ_min/(4·r_scene)`` bound (inclusive)."""
    if not lambda_min > 0:
        raise ValueError(f"Invalid lambda_min {lambda_min}: must be > 0")
    if not r_scene > 0:
        raise ValueError(f"Invalid r_scene {r_scene}: must be > 0")
    threshold = lambda_min / (4 * r_scene)
    ok = ring.dtheta <= threshold or bool(np.isclose(ring.dtheta, threshold, rtol=1e-12, atol=0))
    return SamplingCheck(satisfied=bool(ok), max_dtheta=threshold)
