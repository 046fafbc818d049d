# AUTOGENERATED! DO NOT EDIT! File to edit: pts/tests/integration/test_reproductions.pct.py

__all__ = ['pytestmark', 'quadrant_report', 'scattering', 'test_complex_fit_beats_real_fit', 'test_method_beats_das', 'test_real_fit_misses_imaginary_quadrants', 'test_structured_phase_beats_das', 'test_structured_phase_gains_more', 'test_zero_phase_scene_fits_comparably']

# %% pts/tests/integration/test_reproductions.pct.py 3
import pytest

from csas.config import worker_count
from csas.experiments import quadrant_experiment, run_method, specular_vs_diffuse
from csas.metrics import evaluate_field

# %% pts/tests/integration/test_reproductions.pct.py 4
pytestmark = pytest.mark.integration

# %% pts/tests/integration/test_reproductions.pct.py 6
@pytest.fixture(scope="module")
def quadrant_report(quadrant_cfg):
    return quadrant_experiment(quadrant_cfg, workers=worker_count())

# %% pts/tests/integration/test_reproductions.pct.py 7
def test_complex_fit_beats_real_fit(quadrant_report):
    """The complex field leaves at most 0.2× the real-constrained residual."""
    assert quadrant_report.residual_ratio <= 0.2

# %% pts/tests/integration/test_reproductions.pct.py 8
def test_real_fit_misses_imaginary_quadrants(quadrant_report):
    """Real-constrained fits explain the zero-phase quadrants only."""
    per = quadrant_report.runs["real"].quadrant_residual
    assert per["top-right"] < 0.2 and per["bottom-left"] < 0.2
    assert per["top-left"] > 0.5 and per["bottom-right"] > 0.5

# %% pts/tests/integration/test_reproductions.pct.py 9
def test_zero_phase_scene_fits_comparably(quadrant_cfg):
    """With every quadrant at zero phase, complex and real fits leave similar residuals."""
    report = quadrant_experiment(quadrant_cfg, real_only=True, workers=worker_count())
    assert 0.5 <= report.residual_ratio <= 2.0

# %% pts/tests/integration/test_reproductions.pct.py 11
@pytest.fixture(scope="module")
def scattering(scattering_cfg):
    return specular_vs_diffuse(scattering_cfg, workers=worker_count())

def test_structured_phase_gains_more(scattering):
    """Deconvolution gains at least 3 dB more on the phase-grid scene than on random phase."""
    assert scattering["phase-grid"].gain_db - scattering["diffuse"].gain_db >= 3.0

def test_structured_phase_beats_das(scattering):
    """TV deconvolution improves on DAS when the phase is piecewise constant."""
    assert scattering["phase-grid"].gain_db > 0.0

# %% pts/tests/integration/test_reproductions.pct.py 13
@pytest.mark.parametrize("method", ["wiener", "gd-tv", "gd-grad", "sinr"])
def test_method_beats_das(demo_run, method):
    """Masked PSNR at least 1 dB above the normalized |DAS| baseline."""
    truth = demo_run.scene.sigma
    das = evaluate_field(demo_run.image.data, truth, "das", "sparse")
    result = run_method(method, demo_run.image, demo_run.psf, demo_run.cfg)
    est = evaluate_field(result.field.data, truth, method, "sparse")
    assert est.psnr_db >= das.psnr_db + 1.0
