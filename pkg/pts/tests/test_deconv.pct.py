# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp test_deconv

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Deconvolution Tests
#
# Forward model, direct inverses, gradients and the iterative solvers, on
# synthetic Gaussian PSFs.

# %%
#|export
import numpy as np
import pytest

from csas.beamformer import ComplexImage
from csas.config import BremenConfig, GdConfig
from csas.deconv import (
    ComplexField, DivergedError, bremen_deconvolve, bremen_from_config, convolve_spectrum,
    correlate_spectrum, datafit_grad, fft_convolve, forward_diff, forward_diff_adjoint, gd_deconvolve,
    inverse_filter, kernel_spectrum, regularizer_value_grad, wiener,
)
from csas.geometry import build_grid
from csas.psf import Psf

# %%
#|export
def _gauss_psf(n, s=1.0, imag=0.0, center=None):
    grid = build_grid(n, 0.1)
    c = (n // 2, n // 2) if center is None else center
    i = np.arange(n)
    r2 = (i[:, None] - c[0]) ** 2 + (i[None, :] - c[1]) ** 2
    data = np.exp(-r2 / (2 * s**2)) * (1 + 1j * imag * np.exp(-r2 / (4 * s**2)))
    return Psf(ComplexImage(data.astype(complex), grid), 30e3, 10e3, c)

def _random_psf(n, rng):
    grid = build_grid(n, 0.1)
    data = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return Psf(ComplexImage(data, grid), 30e3, 10e3, (int(rng.integers(n)), int(rng.integers(n))))

def _field(data, grid):
    return ComplexField(np.asarray(data, dtype=complex), grid)

def _random_field(n, rng, grid):
    return _field(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), grid)

def _brute_convolve(x, psf):
    """out[p] = Σ_q x[q]·psf[(p − q + center) mod n] by direct summation."""
    n = x.shape[0]
    kern = np.roll(psf.image.data, (-psf.center[0], -psf.center[1]), axis=(0, 1))
    d = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    T = kern[d[:, None, :, None], d[None, :, None, :]]
    return np.einsum("abcd,cd->ab", T, x)

def _sparse(n, count, rng):
    x = np.zeros(n * n)
    x[rng.choice(n * n, size=count, replace=False)] = rng.uniform(0.5, 1.0, size=count)
    return x.reshape(n, n)

# %% [markdown]
# ## fft_convolve

# %%
#|export
def test_convolve_delta_identity():
    """A delta at the PSF center reproduces the PSF."""
    psf = _gauss_psf(15, imag=0.3)
    x = np.zeros((15, 15))
    x[7, 7] = 1.0
    out = fft_convolve(_field(x, psf.grid), psf)
    np.testing.assert_allclose(out.data, psf.image.data, atol=1e-12)

# %%
#|export
def test_convolve_zero_field():
    """Zero field gives a zero image."""
    psf = _gauss_psf(8)
    out = fft_convolve(_field(np.zeros((8, 8)), psf.grid), psf)
    assert np.abs(out.data).max() < 1e-15

# %%
#|export
@pytest.mark.parametrize("n", [16, 32])
def test_convolve_matches_direct_sum(n):
    """FFT convolution equals brute-force circular convolution on random instances."""
    rng = np.random.default_rng(n)
    for _ in range(25):
        psf = _random_psf(n, rng)
        x = _random_field(n, rng, psf.grid)
        expected = _brute_convolve(x.data, psf)
        out = fft_convolve(x, psf).data
        assert np.linalg.norm(out - expected) < 1e-10 * np.linalg.norm(expected)

# %%
#|export
def test_convolve_size_mismatch():
    """Field and PSF must share a size."""
    psf = _gauss_psf(8)
    with pytest.raises(ValueError, match="Size mismatch"):
        fft_convolve(_field(np.zeros((6, 6)), build_grid(6, 0.1)), psf)

# %%
#|export
def test_adjoint_identity():
    """⟨A x, y⟩ == ⟨x, Aᴴ y⟩."""
    rng = np.random.default_rng(7)
    for n in (8, 16, 31):
        psf = _random_psf(n, rng)
        H = kernel_spectrum(psf)
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        lhs = np.vdot(convolve_spectrum(x, H), y)
        rhs = np.vdot(x, correlate_spectrum(y, H))
        assert abs(lhs - rhs) < 1e-10 * abs(lhs)

# %% [markdown]
# ## Direct inverses

# %%
#|export
def test_inverse_filter_round_trip():
    """Inverse filtering a convolved delta recovers the delta."""
    psf = _gauss_psf(16, s=0.7, imag=0.2)
    delta = np.zeros((16, 16))
    delta[4, 11] = 1.0
    I = fft_convolve(_field(delta, psf.grid), psf)
    np.testing.assert_allclose(inverse_filter(I, psf, eps=1e-8).data, delta, atol=1e-6)

# %%
#|export
def test_inverse_filter_zero_image():
    """Zero image maps to zero field."""
    psf = _gauss_psf(8)
    out = inverse_filter(ComplexImage(np.zeros((8, 8), dtype=complex), psf.grid), psf)
    assert np.all(out.data == 0)

# %%
#|export
def test_inverse_filter_skips_degenerate_bins():
    """Bins below eps·max|Ĥ| contribute nothing."""
    psf = _gauss_psf(16, s=3.0)
    H = kernel_spectrum(psf)
    rng = np.random.default_rng(3)
    I = ComplexImage(rng.standard_normal((16, 16)) + 0j, psf.grid)
    out = np.fft.fft2(inverse_filter(I, psf, eps=1e-3).data)
    dead = np.abs(H) < 1e-3 * np.abs(H).max()
    assert dead.any()
    np.testing.assert_allclose(out[dead], 0.0, atol=1e-9)

# %%
#|export
def test_inverse_filter_amplifies_noise():
    """Noisy input yields more output energy than clean input."""
    psf = _gauss_psf(16, s=1.2)
    rng = np.random.default_rng(4)
    clean = fft_convolve(_field(_sparse(16, 6, rng), psf.grid), psf)
    energies = []
    for seed in range(5):
        noise = np.random.default_rng(seed).normal(0, 0.01, (16, 16))
        noisy = ComplexImage(clean.data + noise, psf.grid)
        energies.append(np.sum(np.abs(inverse_filter(noisy, psf).data) ** 2))
    assert min(energies) >= np.sum(np.abs(inverse_filter(clean, psf).data) ** 2)

# %%
#|export
def test_inverse_filter_invalid_eps():
    """eps must be positive."""
    psf = _gauss_psf(8)
    with pytest.raises(ValueError, match="eps"):
        inverse_filter(psf.image, psf, eps=0.0)

# %%
#|export
def test_wiener_zero_alpha_is_inverse():
    """α = 0 equals the inverse filter on a non-degenerate PSF."""
    psf = _gauss_psf(16, s=0.7, imag=0.1)
    rng = np.random.default_rng(5)
    I = ComplexImage(rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)), psf.grid)
    a = wiener(I, psf, alpha=0.0).data
    b = inverse_filter(I, psf, eps=1e-8).data
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-8 * np.abs(b).max())

# %%
#|export
def test_wiener_large_alpha_is_scaled_matched_filter():
    """For α ≫ max|Ĥ|², the estimate tends to Ĥ*·Î/α."""
    psf = _gauss_psf(16, imag=0.2)
    H = kernel_spectrum(psf)
    alpha = 1e5 * np.abs(H).max() ** 2
    out = wiener(psf.image, psf, alpha).data
    expected = np.fft.ifft2(np.conj(H) * np.fft.fft2(psf.image.data)) / alpha
    np.testing.assert_allclose(out, expected, rtol=0, atol=2e-4 * np.abs(expected).max())

# %%
#|export
def test_wiener_zero_image():
    """Zero image maps to zero field for any α."""
    psf = _gauss_psf(8)
    zero = ComplexImage(np.zeros((8, 8), dtype=complex), psf.grid)
    for alpha in (0.0, 1e-3, 10.0):
        assert np.all(wiener(zero, psf, alpha).data == 0)

# %%
#|export
def test_wiener_negative_alpha():
    """α < 0 is rejected."""
    psf = _gauss_psf(8)
    with pytest.raises(ValueError, match="alpha"):
        wiener(psf.image, psf, -1.0)

# %% [markdown]
# ## Data-fit gradient

# %%
#|export
def _fd_check(value_fn, grad, x, h=1e-5):
    """Central differences on every real and imaginary component."""
    fd = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        for unit in (1.0, 1j):
            xp, xm = x.copy(), x.copy()
            xp[idx] += h * unit
            xm[idx] -= h * unit
            d = (value_fn(xp) - value_fn(xm)) / (2 * h)
            fd[idx] += d * unit
    return np.linalg.norm(fd - grad) / np.linalg.norm(grad)

# %%
#|export
def test_datafit_exact_fit():
    """A field that reproduces I exactly has zero loss and gradient."""
    psf = _gauss_psf(8, imag=0.3)
    x = _random_field(8, np.random.default_rng(0), psf.grid)
    I = fft_convolve(x, psf)
    loss, grad = datafit_grad(x, psf, I)
    assert loss < 1e-24
    assert np.abs(grad).max() < 1e-10

# %%
#|export
def test_datafit_gradient_finite_differences():
    """The analytic gradient matches central differences on random 8×8 instances."""
    rng = np.random.default_rng(1)
    for _ in range(20):
        psf = _random_psf(8, rng)
        I = _random_field(8, rng, psf.grid)
        x = _random_field(8, rng, psf.grid)
        _, grad = datafit_grad(x, psf, I)
        err = _fd_check(lambda v: datafit_grad(ComplexImage(v, psf.grid), psf, I)[0], grad, x.data)
        assert err < 1e-4

# %%
#|export
def test_datafit_homogeneity():
    """Scaling the residual by c scales the loss by c² and the gradient by c."""
    psf = _gauss_psf(8, imag=0.1)
    rng = np.random.default_rng(2)
    I = _random_field(8, rng, psf.grid)
    zero = _field(np.zeros((8, 8)), psf.grid)
    l1, g1 = datafit_grad(zero, psf, I)
    l3, g3 = datafit_grad(zero, psf, ComplexImage(3.0 * I.data, psf.grid))
    assert l3 == pytest.approx(9.0 * l1)
    np.testing.assert_allclose(g3, 3.0 * g1, atol=1e-12 * np.abs(g3).max())

# %% [markdown]
# ## Regularizers

# %%
#|export
def test_forward_diff_adjoint():
    """forward_diff_adjoint is the transpose of forward_diff."""
    rng = np.random.default_rng(3)
    x = rng.standard_normal((9, 9))
    u, v = rng.standard_normal((2, 9, 9))
    dx, dy = forward_diff(x)
    assert np.sum(dx * u + dy * v) == pytest.approx(np.sum(x * forward_diff_adjoint(u, v)))

# %%
#|export
def test_regularizers_on_constant_field():
    """Constant field: tv is n²·eps_tv and the gradient penalty is exactly zero."""
    grid = build_grid(8, 0.1)
    x = _field(np.full((8, 8), 2.0 - 1.0j), grid)
    tv, _ = regularizer_value_grad(x, "tv", eps_tv=1e-6)
    assert tv == pytest.approx(64 * 1e-6)
    gr, g = regularizer_value_grad(x, "gradient")
    assert gr == 0.0
    assert np.all(g == 0)

# %%
#|export
@pytest.mark.parametrize("kind", ["tv", "gradient"])
def test_regularizer_gradient_finite_differences(kind):
    """Analytic regularizer gradients match central differences on random 8×8 fields."""
    rng = np.random.default_rng(4)
    grid = build_grid(8, 0.1)
    for _ in range(20):
        x = _random_field(8, rng, grid)
        _, grad = regularizer_value_grad(x, kind, 1e-6)
        err = _fd_check(lambda v: regularizer_value_grad(ComplexImage(v, grid), kind, 1e-6)[0], grad, x.data)
        assert err < 1e-4

# %%
#|export
def test_tv_prefers_smooth_fields():
    """A ±1 checkerboard has larger tv than a constant field of equal energy."""
    grid = build_grid(8, 0.1)
    checker = np.where((np.arange(8)[:, None] + np.arange(8)[None, :]) % 2, 1.0, -1.0)
    tv_checker, _ = regularizer_value_grad(_field(checker, grid), "tv")
    tv_const, _ = regularizer_value_grad(_field(np.ones((8, 8)), grid), "tv")
    assert tv_checker > tv_const

# %%
#|export
def test_unknown_regularizer():
    """Only tv and gradient are known."""
    with pytest.raises(ValueError, match="Unknown regularizer"):
        regularizer_value_grad(_field(np.zeros((4, 4)), build_grid(4, 0.1)), "l1")

# %% [markdown]
# ## gd_deconvolve

# %%
#|export
def test_gd_converges_on_noiseless_data():
    """β = 0 on noiseless sparse data drives the loss below 1e-4 of its start."""
    rng = np.random.default_rng(5)
    psf = _gauss_psf(32, s=1.0)
    I = fft_convolve(_field(_sparse(32, 12, rng), psf.grid), psf)
    result = gd_deconvolve(I, psf, GdConfig(iterations=5000))
    trace = result.loss_trace
    assert len(trace) == 5001
    assert trace[result.best_iteration] == min(trace)
    assert min(trace) < 1e-4 * trace[0]
    loss, _ = datafit_grad(result.field, psf, I)
    assert loss == pytest.approx(min(trace))

# %%
#|export
def test_gd_large_tv_weight_flattens():
    """A dominant tv weight drives the estimate toward a constant field."""
    rng = np.random.default_rng(6)
    psf = _gauss_psf(16, s=1.0)
    I = fft_convolve(_field(_sparse(16, 8, rng), psf.grid), psf)
    cfg = GdConfig(regularizer="tv", reg_weight=1e4, eps_tv=1.0, momentum=0.0, iterations=2000)
    x = gd_deconvolve(I, psf, cfg).field.data
    assert np.std(x) < 0.05 * np.std(I.data)

# %%
#|export
def test_gd_zero_iterations_returns_init():
    """iterations = 0 returns the scaled DAS initialization."""
    psf = _gauss_psf(8)
    I = ComplexImage(np.random.default_rng(7).standard_normal((8, 8)) + 0j, psf.grid)
    result = gd_deconvolve(I, psf, GdConfig(iterations=0, init_scale=0.1))
    np.testing.assert_allclose(result.field.data, 0.1 * I.data / np.abs(I.data).max())
    assert len(result.loss_trace) == 1
    assert result.iterations_run == 0

# %%
#|export
def test_gd_uniform_init_deterministic():
    """The uniform initialization is seeded."""
    psf = _gauss_psf(8)
    I = psf.image
    a = gd_deconvolve(I, psf, GdConfig(iterations=0, init="uniform", seed=3)).field.data
    b = gd_deconvolve(I, psf, GdConfig(iterations=0, init="uniform", seed=3)).field.data
    np.testing.assert_array_equal(a, b)
    assert np.all((a.real >= 0) & (a.real < 0.1))

# %%
#|export
@pytest.mark.parametrize("constraint", ["real", "nonnegative"])
def test_gd_constraints(constraint):
    """Projected iterates stay real (and non-negative when asked)."""
    psf = _gauss_psf(16, imag=0.4)
    rng = np.random.default_rng(8)
    I = fft_convolve(_random_field(16, rng, psf.grid), psf)
    x = gd_deconvolve(I, psf, GdConfig(iterations=50, constraint=constraint)).field.data
    assert np.all(x.imag == 0)
    if constraint == "nonnegative":
        assert np.all(x.real >= 0)

# %%
#|export
def test_gd_divergence_raises_with_trace():
    """An unstable step size raises DivergedError carrying the trace."""
    psf = _gauss_psf(16)
    I = fft_convolve(_field(_sparse(16, 4, np.random.default_rng(9)), psf.grid), psf)
    with pytest.raises(DivergedError) as exc:
        gd_deconvolve(I, psf, GdConfig(learning_rate=50.0, iterations=500))
    assert len(exc.value.trace) == exc.value.iteration + 1
    assert exc.value.trace[-1] > 1e6 * exc.value.trace[0]

# %%
#|export
def test_complex_fit_beats_real_fit():
    """On a mixed real/imaginary scene the complex fit leaves ≤ 0.2× the real-constrained residual."""
    rng = np.random.default_rng(10)
    psf = _gauss_psf(16, s=1.0)
    x = _sparse(16, 10, rng) + 1j * _sparse(16, 10, rng)
    I = fft_convolve(_field(x, psf.grid), psf)
    free = gd_deconvolve(I, psf, GdConfig(iterations=1000))
    real = gd_deconvolve(I, psf, GdConfig(iterations=1000, constraint="real"))
    assert min(free.loss_trace) <= min(real.loss_trace)
    assert min(free.loss_trace) <= 0.2 * min(real.loss_trace)

# %% [markdown]
# ## bremen_deconvolve

# %%
#|export
def test_bremen_fits_real_image():
    """A strictly real image is fitted to under 10% residual in 500 iterations."""
    rng = np.random.default_rng(11)
    psf = _gauss_psf(32, s=1.0)
    I = fft_convolve(_field(_sparse(32, 12, rng), psf.grid), psf)
    result = bremen_deconvolve(I, psf, iterations=500)
    assert min(result.loss_trace) < 0.1 * result.loss_trace[0]
    assert np.all(result.field.data.imag == 0)
    assert np.all(result.field.data.real >= 0)

# %%
#|export
def test_bremen_cannot_fit_imaginary_image():
    """A strictly imaginary image keeps over 50% residual against the complex image."""
    rng = np.random.default_rng(12)
    psf = _gauss_psf(32, s=1.0)
    I = fft_convolve(_field(1j * _sparse(32, 12, rng), psf.grid), psf)
    result = bremen_deconvolve(I, psf, iterations=500)
    r = fft_convolve(result.field, psf).data - I.data
    assert np.sum(np.abs(r) ** 2) > 0.5 * np.sum(np.abs(I.data) ** 2)

# %%
#|export
def test_bremen_zero_iterations():
    """iterations = 0 returns the zero initialization."""
    psf = _gauss_psf(8)
    result = bremen_deconvolve(psf.image, psf, iterations=0)
    assert np.all(result.field.data == 0)
    assert len(result.loss_trace) == 1

# %%
#|export
@pytest.mark.parametrize("relaxation", [0.0, -0.1, 1e9])
def test_bremen_invalid_relaxation(relaxation):
    """Relaxation must lie in (0, 2/max|Ĥ|)."""
    psf = _gauss_psf(8)
    with pytest.raises(ValueError, match="relaxation"):
        bremen_deconvolve(psf.image, psf, relaxation=relaxation)

# %%
#|export
def test_bremen_from_config():
    """The config wrapper forwards relaxation and iterations."""
    psf = _gauss_psf(8)
    result = bremen_from_config(psf.image, psf, BremenConfig(iterations=3))
    assert len(result.loss_trace) == 4
