# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp test_simulator

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Simulator Tests
#
# Point-scattering synthesis, phase variants and noise injection. Scenes are
# kept small (a handful of pixels, few angles) so the suite stays fast.

# %%
#|export
import numpy as np
import pytest

from csas.geometry import build_grid, build_ring
from csas.signal import TimeSeries, analytic_signal, lfm_chirp, match_filter
from csas.simulator import (
    PingSet, ScatterScene, add_noise, apply_phase_quadrants, apply_random_phase,
    noise_variance_for_psnr, quadrant_phase, simulate, synthesize, time_window,
)

# %%
#|export
C = 343.0

def _setup(n=9, extent=0.1, n_angles=8):
    grid = build_grid(n, extent)
    ring = build_ring(1.0, 1.0, n_angles)
    w = lfm_chirp(30e3, 10e3, 1e-3, 100e3)
    return grid, ring, w

def _point_scene(grid, pixels, values=None):
    sigma = np.zeros((grid.n, grid.n))
    for k, (i, j) in enumerate(pixels):
        sigma[i, j] = 1.0 if values is None else values[k]
    return ScatterScene(grid, sigma)

# %% [markdown]
# ## Scene and ping containers

# %%
#|export
def test_scene_validation():
    """Negative σ and mismatched shapes are rejected."""
    grid = build_grid(4, 1.0)
    with pytest.raises(ValueError, match="non-negative"):
        ScatterScene(grid, -np.ones((4, 4)))
    with pytest.raises(ValueError, match="does not match"):
        ScatterScene(grid, np.ones((3, 3)))
    with pytest.raises(ValueError, match="phase shape"):
        ScatterScene(grid, np.ones((4, 4)), np.zeros((2, 2)))

# %%
#|export
def test_pingset_rows_match_ring():
    """One ping row per ring angle."""
    with pytest.raises(ValueError, match="angles"):
        PingSet(np.zeros((3, 10)), 100e3, 0.0, build_ring(1.0, 1.0, 4))

# %%
#|export
def test_time_window_on_sample_lattice():
    """t0 is a whole number of samples and the window covers the far corner plus the chirp."""
    grid, ring, w = _setup()
    t0, n_t = time_window(ring, grid, w, C)
    assert t0 * w.fs == pytest.approx(round(t0 * w.fs))
    far = np.hypot(1.0 + grid.half_diagonal, 1.0)
    assert t0 + n_t / w.fs >= 2 * far / C + w.duration

# %% [markdown]
# ## simulate

# %%
#|export
def test_empty_scene_is_silent():
    """σ ≡ 0 without noise gives all-zero pings."""
    grid, ring, w = _setup()
    pings = simulate(ScatterScene(grid, np.zeros((grid.n, grid.n))), ring, w, C)
    assert pings.pings.shape[0] == ring.n_angles
    assert np.all(pings.pings == 0)

# %%
#|export
def test_center_scatterer_onset():
    """A centered scatterer gives identical pings whose compressed peak sits at 2√2/c."""
    grid, ring, w = _setup(n=5, n_angles=6)
    pings = simulate(_point_scene(grid, [(2, 2)]), ring, w, C)
    for row in pings.pings[1:]:
        np.testing.assert_allclose(row, pings.pings[0], atol=1e-9 * np.abs(pings.pings).max())
    env = np.abs(analytic_signal(match_filter(TimeSeries(pings.pings[0], w.fs), w)).samples)
    start = round(pings.t0 * w.fs)
    assert start + int(np.argmax(env)) == round(w.fs * 2 * np.sqrt(2) / C)

# %%
#|export
def test_linearity_two_scatterers():
    """Two scatterers give the sum of their single-scatterer pings."""
    grid, ring, w = _setup()
    a = simulate(_point_scene(grid, [(2, 3)]), ring, w, C).pings
    b = simulate(_point_scene(grid, [(6, 5)]), ring, w, C).pings
    ab = simulate(_point_scene(grid, [(2, 3), (6, 5)]), ring, w, C).pings
    np.testing.assert_allclose(ab, a + b, atol=1e-10 * np.abs(ab).max())

# %%
#|export
def test_linearity_in_sigma():
    """simulate(aσ₁ + bσ₂) == a·simulate(σ₁) + b·simulate(σ₂)."""
    grid, ring, w = _setup()
    rng = np.random.default_rng(0)
    s1, s2 = rng.uniform(0, 1, (2, grid.n, grid.n))
    p1 = simulate(ScatterScene(grid, s1), ring, w, C).pings
    p2 = simulate(ScatterScene(grid, s2), ring, w, C).pings
    p12 = simulate(ScatterScene(grid, 2.0 * s1 + 0.5 * s2), ring, w, C).pings
    np.testing.assert_allclose(p12, 2.0 * p1 + 0.5 * p2, atol=1e-9 * np.abs(p12).max())

# %%
#|export
def test_rotational_covariance():
    """Rotating the scene by one ring step shifts the ping rows by one."""
    grid, ring, w = _setup(n=7, n_angles=4)
    sigma = np.random.default_rng(1).uniform(0, 1, (7, 7))
    p = simulate(ScatterScene(grid, sigma), ring, w, C).pings
    rotated = simulate(ScatterScene(grid, np.rot90(sigma, -1)), ring, w, C).pings
    np.testing.assert_allclose(rotated, np.roll(p, 1, axis=0), atol=1e-9 * np.abs(p).max())

# %%
#|export
def test_points_outside_grid_widen_window():
    """A scatterer outside the grid still lands fully inside the ping window."""
    grid, ring, w = _setup()
    pings = synthesize(np.array([[0.5, 0.0, 0.0]]), np.array([1.0]), ring, grid, w, C)
    near = np.hypot(0.5, 1.0)
    assert pings.t0 <= 2 * near / C
    energy = np.sum(pings.pings**2, axis=1)
    np.testing.assert_allclose(energy, energy.max(), rtol=0.5)

# %%
#|export
def test_determinism_and_workers():
    """Same inputs and seed give bit-identical pings for any worker count."""
    grid, ring, w = _setup()
    scene = _point_scene(grid, [(1, 1), (4, 7)])
    a = simulate(scene, ring, w, C, noise_eta=0.1, seed=5)
    b = simulate(scene, ring, w, C, noise_eta=0.1, seed=5, workers=4)
    np.testing.assert_array_equal(a.pings, b.pings)
    c = simulate(scene, ring, w, C, noise_eta=0.1, seed=6)
    assert not np.array_equal(a.pings, c.pings)

# %%
#|export
def test_negative_noise_rejected():
    """Negative noise variance is an invalid argument."""
    grid, ring, w = _setup()
    with pytest.raises(ValueError, match="noise"):
        simulate(_point_scene(grid, [(0, 0)]), ring, w, C, noise_eta=-1.0)

# %%
#|export
def test_invalid_sound_speed():
    """Non-positive c is rejected."""
    grid, ring, w = _setup()
    with pytest.raises(ValueError, match="sound speed"):
        simulate(_point_scene(grid, [(0, 0)]), ring, w, 0.0)

# %% [markdown]
# ## Noise

# %%
#|export
def test_noise_calibration():
    """Sample variance of noise-only pings is within 5% of η."""
    ring = build_ring(1.0, 1.0, 100)
    pings = PingSet(np.zeros((100, 10_000)), 100e3, 0.0, ring)
    noisy = add_noise(pings, 0.04, seed=3)
    assert np.var(noisy.pings) == pytest.approx(0.04, rel=0.05)

# %%
#|export
def test_noise_streams_per_angle():
    """Each angle's noise depends only on (seed, angle)."""
    pings = PingSet(np.zeros((6, 50)), 100e3, 0.0, build_ring(1.0, 1.0, 6))
    a = add_noise(pings, 1.0, seed=9).pings
    b = add_noise(pings, 1.0, seed=9).pings
    np.testing.assert_array_equal(a, b)
    assert not np.allclose(a[0], a[1])

# %%
#|export
@pytest.mark.parametrize("psnr,eta", [(20.0, 0.01), (0.0, 1.0), (17.0, 10 ** -1.7), (np.inf, 0.0)])
def test_noise_variance_for_psnr(psnr, eta):
    """η = 10^(−PSNR/10); infinite PSNR is noiseless."""
    assert noise_variance_for_psnr(psnr) == pytest.approx(eta)

# %%
#|export
def test_noise_variance_round_trip():
    """10·log10(1/η) recovers the PSNR."""
    for psnr in [5.0, 17.0, 25.0, 40.0]:
        assert 10 * np.log10(1 / noise_variance_for_psnr(psnr)) == pytest.approx(psnr)

# %% [markdown]
# ## Phase variants

# %%
#|export
def test_quadrant_phase_layout():
    """4×4: top-right and bottom-left quadrants carry 0, the others π/2."""
    grid = build_grid(4, 1.0)
    scene = apply_phase_quadrants(ScatterScene(grid, np.ones((4, 4))))
    p = scene.phase
    np.testing.assert_array_equal(p[0:2, 2:4], 0.0)
    np.testing.assert_array_equal(p[2:4, 0:2], 0.0)
    np.testing.assert_array_equal(p[0:2, 0:2], np.pi / 2)
    np.testing.assert_array_equal(p[2:4, 2:4], np.pi / 2)
    amps = scene.amplitudes
    assert np.all(amps[0:2, 2:4].imag == 0)
    np.testing.assert_allclose(amps[0:2, 0:2].real, 0.0, atol=1e-15)

# %%
#|export
def test_quadrant_phase_minimal():
    """2×2: each quadrant is one pixel."""
    np.testing.assert_array_equal(quadrant_phase(2), [[np.pi / 2, 0.0], [0.0, np.pi / 2]])

# %%
#|export
def test_random_phase_deterministic():
    """Same seed gives identical phases; different seeds differ almost everywhere."""
    grid = build_grid(32, 1.0)
    scene = ScatterScene(grid, np.ones((32, 32)))
    a = apply_random_phase(scene, 1).phase
    np.testing.assert_array_equal(a, apply_random_phase(scene, 1).phase)
    b = apply_random_phase(scene, 2).phase
    assert np.mean(a != b) > 0.99

# %%
#|export
def test_random_phase_uniform():
    """Phases lie in [0, 2π) with mean near π."""
    grid = build_grid(100, 1.0)
    phase = apply_random_phase(ScatterScene(grid, np.ones((100, 100))), 0).phase
    assert phase.min() >= 0 and phase.max() < 2 * np.pi
    assert abs(phase.mean() - np.pi) < 0.1

# %%
#|export
def test_phase_rotates_echo():
    """A uniform scatterer phase rotates the analytic echo by the same angle."""
    grid, ring, w = _setup(n=5, n_angles=3)
    base = _point_scene(grid, [(1, 3)])
    rotated = ScatterScene(grid, base.sigma, np.full((5, 5), 0.7))

    def compressed(scene):
        pings = simulate(scene, ring, w, C).pings
        return analytic_signal(match_filter(TimeSeries(pings, w.fs), w)).samples

    a, b = compressed(base), compressed(rotated)
    for ra, rb in zip(a, b):
        k = np.argmax(np.abs(ra))
        assert abs(rb[k] / ra[k] - np.exp(0.7j)) < 1e-2
