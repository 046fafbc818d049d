# AUTOGENERATED! DO NOT EDIT! File to edit: pts/tests/test_geometry.pct.py

__all__ = ['test_grid_coords_symmetric', 'test_grid_invalid', 'test_grid_pitch_and_corner', 'test_mesh_axes', 'test_odd_grid_center_pixel', 'test_ring_invalid', 'test_ring_one_degree', 'test_ring_positions_on_circle', 'test_sampling_airsas_like', 'test_sampling_bound_inclusive', 'test_sampling_invalid', 'test_sampling_threshold', 'test_single_transducer', 'test_square_ring', 'test_two_point_grid']

# %% pts/tests/test_geometry.pct.py 3
import numpy as np
import pytest

from csas.geometry import build_grid, build_ring, check_sampling

# %% pts/tests/test_geometry.pct.py 5
def test_grid_pitch_and_corner():
    """400 pixels over 0.8 m: pitch 0.8/399, corner at (−0.4, −0.4)."""
    g = build_grid(400, 0.8)
    assert g.pitch == pytest.approx(0.8 / 399)
    X, Y = g.mesh()
    assert (X[0, 0], Y[0, 0]) == (pytest.approx(-0.4), pytest.approx(-0.4))
    assert (X[-1, -1], Y[-1, -1]) == (pytest.approx(0.4), pytest.approx(0.4))

# %% pts/tests/test_geometry.pct.py 6
def test_two_point_grid():
    """n=2 over 2 m has coordinates {−1, +1}."""
    np.testing.assert_allclose(build_grid(2, 2.0).coords, [-1.0, 1.0])

# %% pts/tests/test_geometry.pct.py 7
def test_odd_grid_center_pixel():
    """n=3 puts the middle pixel exactly at the origin."""
    g = build_grid(3, 1.0)
    assert g.coords[1] == 0.0
    assert g.pixel_of(0.0, 0.0) == (1, 1)

# %% pts/tests/test_geometry.pct.py 8
def test_grid_coords_symmetric():
    """coords[i] == −coords[n−1−i]."""
    c = build_grid(64, 0.2).coords
    np.testing.assert_allclose(c, -c[::-1], atol=1e-15)

# %% pts/tests/test_geometry.pct.py 9
def test_mesh_axes():
    """X varies along columns, Y along rows."""
    g = build_grid(5, 1.0)
    X, Y = g.mesh()
    assert np.all(np.diff(X, axis=1) > 0) and np.all(np.diff(X, axis=0) == 0)
    assert np.all(np.diff(Y, axis=0) > 0) and np.all(np.diff(Y, axis=1) == 0)
    assert g.pixel_of(X[1, 3], Y[1, 3]) == (1, 3)

# %% pts/tests/test_geometry.pct.py 10
@pytest.mark.parametrize("n,extent", [(1, 1.0), (8, 0.0), (8, -1.0)])
def test_grid_invalid(n, extent):
    """Invalid dimensions are rejected."""
    with pytest.raises(ValueError):
        build_grid(n, extent)

# %% pts/tests/test_geometry.pct.py 12
def test_ring_one_degree():
    """360 angles give a 1° step."""
    ring = build_ring(1.0, 1.0, 360)
    assert np.degrees(ring.dtheta) == pytest.approx(1.0)
    assert np.all(np.diff(ring.angles) > 0)

# %% pts/tests/test_geometry.pct.py 13
def test_single_transducer():
    """One angle sits at (radius, 0, height)."""
    np.testing.assert_allclose(build_ring(2.0, 0.5, 1).positions, [[2.0, 0.0, 0.5]])

# %% pts/tests/test_geometry.pct.py 14
def test_square_ring():
    """Four angles at 0°, 90°, 180°, 270°; adjacent positions √2·radius apart."""
    ring = build_ring(1.5, 1.0, 4)
    np.testing.assert_allclose(np.degrees(ring.angles), [0, 90, 180, 270])
    p = ring.positions
    for k in range(4):
        assert np.linalg.norm(p[k] - p[(k + 1) % 4]) == pytest.approx(np.sqrt(2) * 1.5)

# %% pts/tests/test_geometry.pct.py 15
def test_ring_positions_on_circle():
    """Every transducer is `radius` from the z-axis."""
    p = build_ring(1.0, 1.0, 97).positions
    np.testing.assert_allclose(np.hypot(p[:, 0], p[:, 1]), 1.0, rtol=1e-12)
    np.testing.assert_allclose(p[:, 2], 1.0)

# %% pts/tests/test_geometry.pct.py 16
def test_ring_invalid():
    """Zero angles or non-positive radius are rejected."""
    with pytest.raises(ValueError, match="n_angles"):
        build_ring(1.0, 1.0, 0)
    with pytest.raises(ValueError, match="radius"):
        build_ring(0.0, 1.0, 8)

# %% pts/tests/test_geometry.pct.py 18
def test_sampling_threshold():
    """λ_min = 0.02 m over r = 0.25 m gives a 0.02 rad threshold."""
    check = check_sampling(build_ring(1.0, 1.0, 360), 0.02, 0.25)
    assert check.max_dtheta == pytest.approx(0.02)
    assert check.satisfied == (2 * np.pi / 360 <= 0.02)

# %% pts/tests/test_geometry.pct.py 19
def test_sampling_bound_inclusive():
    """A ring whose step equals the threshold satisfies it."""
    ring = build_ring(1.0, 1.0, 100)
    check = check_sampling(ring, 4 * 0.5 * ring.dtheta, 0.5)
    assert check.satisfied

# %% pts/tests/test_geometry.pct.py 20
def test_sampling_airsas_like():
    """343 m/s at 30 kHz over r = 0.2 m compared with a 360-angle ring."""
    lam = 343 / 30000
    threshold = lam / 0.8
    check = check_sampling(build_ring(1.0, 1.0, 360), lam, 0.2)
    assert check.max_dtheta == pytest.approx(threshold)
    assert check.satisfied is bool(np.pi / 180 <= threshold)

# %% pts/tests/test_geometry.pct.py 21
def test_sampling_invalid():
    """Non-positive wavelength or radius are rejected."""
    ring = build_ring(1.0, 1.0, 8)
    with pytest.raises(ValueError):
        check_sampling(ring, 0.0, 1.0)
    with pytest.raises(ValueError):
        check_sampling(ring, 1.0, 0.0)
