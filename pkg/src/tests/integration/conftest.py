# AUTOGENERATED! DO NOT EDIT! File to edit: pts/tests/integration/conftest.pct.py

__all__ = ['CONFIGS_DIR', 'DemoRun', 'demo_cfg', 'demo_run', 'quadrant_cfg', 'scattering_cfg', 'small_cfg']

# %% pts/tests/integration/conftest.pct.py 3
from dataclasses import dataclass, replace
from pathlib import Path

import pytest

from csas.beamformer import ComplexImage
from csas.config import RunConfig, SceneConfig, demo_config, load_run_config, worker_count
from csas.experiments import form_image, psf_for, simulate_pings
from csas.psf import Psf
from csas.scenes import make_scene
from csas.simulator import ScatterScene

# %% pts/tests/integration/conftest.pct.py 4
CONFIGS_DIR = Path(__file__).resolve().parents[3] / "configs"

# %% pts/tests/integration/conftest.pct.py 5
@dataclass
class DemoRun:
    cfg: RunConfig
    scene: ScatterScene
    image: ComplexImage
    psf: Psf

# %% pts/tests/integration/conftest.pct.py 7
@pytest.fixture(scope="session")
def demo_cfg(tmp_path_factory) -> RunConfig:
    """Bundled 64×64 sparse demo: 180 angles, 30→10 kHz chirp."""
    return demo_config(str(tmp_path_factory.mktemp("demo")))

@pytest.fixture(scope="session")
def small_cfg(demo_cfg) -> RunConfig:
    """32×32 variant of the demo for the quadrant and scattering experiments."""
    return replace(demo_cfg, scene=replace(demo_cfg.scene, n=32, extent=0.1))

# %% pts/tests/integration/conftest.pct.py 9
@pytest.fixture(scope="session")
def demo_run(demo_cfg) -> DemoRun:
    """Noiseless DAS image and normalized PSF of the demo scene."""
    workers = worker_count()
    scene = make_scene(demo_cfg.scene, demo_cfg.seed)
    image = form_image(demo_cfg, simulate_pings(demo_cfg, scene, workers), scene.grid, workers)
    return DemoRun(demo_cfg, scene, image, psf_for(demo_cfg, scene.grid, workers))

@pytest.fixture(scope="session")
def quadrant_cfg(small_cfg) -> RunConfig:
    return replace(small_cfg, scene=SceneConfig(kind="quadrants", n=32, extent=0.1, spacing=4))

@pytest.fixture(scope="session")
def scattering_cfg(tmp_path_factory) -> RunConfig:
    """configs/specular_diffuse.toml: flat 32×32 disk, strong-TV gd-tv."""
    cfg = load_run_config(CONFIGS_DIR / "specular_diffuse.toml")
    return replace(cfg, output_dir=str(tmp_path_factory.mktemp("scattering")))
