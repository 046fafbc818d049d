# AUTOGENERATED! DO NOT EDIT! File to edit: pts/tests/test_io.pct.py

__all__ = ['test_checkpoint_rejects_other_tensors', 'test_checkpoint_round_trip', 'test_complex_zeros_layout', 'test_corrupt_tensor', 'test_export_phase_png', 'test_export_png_grid', 'test_export_png_reads_back', 'test_field_provenance_required', 'test_field_records_provenance', 'test_float_metadata_round_trips', 'test_image_kind_round_trip', 'test_invalid_metadata_key', 'test_kind_mismatch', 'test_metrics_csv_round_trip', 'test_pings_round_trip', 'test_psf_round_trip', 'test_real_tensor_stays_real', 'test_round_trip_bit_exact', 'test_scene_round_trip', 'test_scene_without_phase', 'test_truncated_metadata', 'test_uint8_mapping', 'test_unsupported_dtype']

# %% pts/tests/test_io.pct.py 3
import math
import struct

import imageio.v3 as iio
import numpy as np
import pytest

from csas.beamformer import ComplexImage
from csas.geometry import build_grid, build_ring
from csas.inr import init_mlp, make_encoding
from csas.io import (
    TensorFormatError, decode_tensor, encode_tensor, export_phase_png, export_png, export_png_grid, load_checkpoint,
    load_image, load_pings, load_psf, load_scene, phase_to_uint8, read_metrics_csv, read_tensor, save_checkpoint,
    save_field, save_image, save_pings, save_psf, save_scene, to_uint8, write_metrics_csv, write_tensor,
)
from csas.metrics import MetricReport
from csas.psf import Psf
from csas.simulator import PingSet, ScatterScene

# %% pts/tests/test_io.pct.py 4
def _f32(a):
    """Values exactly representable on disk."""
    return np.asarray(a, dtype=np.complex64 if np.iscomplexobj(a) else np.float32).astype(
        complex if np.iscomplexobj(a) else float
    )

# %% pts/tests/test_io.pct.py 6
def test_complex_zeros_layout():
    """A 2×2 complex zero tensor is a 24-byte header plus a 32-byte zero payload."""
    raw = encode_tensor(np.zeros((2, 2), dtype=complex))
    assert raw[:4] == b"CSAS"
    assert len(raw) == 12 + 2 * 4 + 4 + 32
    assert raw[-32:] == bytes(32)
    data, meta = decode_tensor(raw)
    assert data.dtype == np.complex128 and data.shape == (2, 2)
    assert meta == {}

# %% pts/tests/test_io.pct.py 7
def test_round_trip_bit_exact(tmp_path):
    """64×64 complex data representable in c64 survives a file round trip exactly."""
    rng = np.random.default_rng(0)
    data = _f32(rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64)))
    write_tensor(tmp_path / "x.csas", data, {"kind": "image", "note": "a=b"})
    back, meta = read_tensor(tmp_path / "x.csas")
    np.testing.assert_array_equal(back, data)
    assert meta == {"kind": "image", "note": "a=b"}

# %% pts/tests/test_io.pct.py 8
def test_real_tensor_stays_real():
    """Real floats decode as float64."""
    data, _ = decode_tensor(encode_tensor(np.arange(6.0).reshape(2, 3)))
    assert data.dtype == np.float64
    np.testing.assert_array_equal(data, np.arange(6.0).reshape(2, 3))

# %% pts/tests/test_io.pct.py 9
def test_float_metadata_round_trips():
    """Float metadata is written with full precision."""
    _, meta = decode_tensor(encode_tensor(np.zeros(1), {"fs": 1 / 3}))
    assert float(meta["fs"]) == 1 / 3

# %% pts/tests/test_io.pct.py 10
def test_unsupported_dtype():
    """Integer arrays cannot be stored."""
    with pytest.raises(ValueError, match="Unsupported dtype"):
        encode_tensor(np.zeros(3, dtype=int))

# %% pts/tests/test_io.pct.py 11
def test_invalid_metadata_key():
    """Keys containing '=' are rejected."""
    with pytest.raises(ValueError, match="Invalid metadata"):
        encode_tensor(np.zeros(1), {"a=b": 1})

# %% pts/tests/test_io.pct.py 12
@pytest.mark.parametrize("mutate,message", [
    (lambda raw: b"XXXX" + raw[4:], "Bad magic"),
    (lambda raw: raw[:4] + struct.pack("<H", 9) + raw[6:], "Unsupported version"),
    (lambda raw: raw[:6] + struct.pack("<H", 7) + raw[8:], "Unknown dtype tag"),
    (lambda raw: raw[:5], "Truncated header"),
    (lambda raw: raw[:-1], "Payload"),
    (lambda raw: raw + b"\x00", "Payload"),
])
def test_corrupt_tensor(mutate, message):
    """Corruptions are reported as TensorFormatError."""
    raw = encode_tensor(np.ones((3, 3)), {"kind": "scene"})
    with pytest.raises(TensorFormatError, match=message):
        decode_tensor(mutate(raw))

# %% pts/tests/test_io.pct.py 13
def test_truncated_metadata():
    """A metadata length past the end of the file is reported."""
    raw = bytearray(encode_tensor(np.ones(2), {"k": "v"}))
    struct.pack_into("<I", raw, 12 + 4, 10_000)
    with pytest.raises(TensorFormatError, match="Truncated metadata"):
        decode_tensor(bytes(raw))

# %% pts/tests/test_io.pct.py 15
def test_scene_round_trip(tmp_path):
    """σ, φ and the grid survive save/load."""
    grid = build_grid(8, 0.2, z0=0.01)
    rng = np.random.default_rng(1)
    scene = ScatterScene(grid, _f32(rng.uniform(size=(8, 8))), _f32(rng.uniform(0, 6, size=(8, 8))))
    save_scene(tmp_path / "scene.csas", scene, seed=3)
    back = load_scene(tmp_path / "scene.csas")
    assert back.grid == grid
    np.testing.assert_array_equal(back.sigma, scene.sigma)
    np.testing.assert_array_equal(back.phase, scene.phase)

# %% pts/tests/test_io.pct.py 16
def test_scene_without_phase(tmp_path):
    """A scene without a phase map loads without one."""
    scene = ScatterScene(build_grid(4, 0.1), np.ones((4, 4)))
    save_scene(tmp_path / "scene.csas", scene)
    assert load_scene(tmp_path / "scene.csas").phase is None

# %% pts/tests/test_io.pct.py 17
def test_pings_round_trip(tmp_path):
    """Pings, timing and ring geometry survive save/load."""
    ring = build_ring(1.0, 0.5, 6)
    data = _f32(np.random.default_rng(2).standard_normal((6, 40)))
    save_pings(tmp_path / "pings.csas", PingSet(data, 100e3, 2.5e-3, ring), sound_speed=343.0)
    back, meta = load_pings(tmp_path / "pings.csas")
    np.testing.assert_array_equal(back.pings, data)
    assert (back.fs, back.t0) == (100e3, 2.5e-3)
    np.testing.assert_allclose(back.ring.positions, ring.positions)
    assert float(meta["sound_speed"]) == 343.0

# %% pts/tests/test_io.pct.py 18
def test_psf_round_trip(tmp_path):
    """PSF image, band and center survive save/load."""
    grid = build_grid(5, 0.1)
    img = ComplexImage(_f32(np.arange(25).reshape(5, 5) * (1 + 0.5j)), grid)
    save_psf(tmp_path / "psf.csas", Psf(img, 30e3, 10e3, (2, 3)))
    back = load_psf(tmp_path / "psf.csas")
    assert (back.f_start, back.f_stop, back.center) == (30e3, 10e3, (2, 3))
    np.testing.assert_array_equal(back.image.data, img.data)

# %% pts/tests/test_io.pct.py 19
def test_kind_mismatch(tmp_path):
    """Loading a scene as an image is a format error."""
    save_scene(tmp_path / "scene.csas", ScatterScene(build_grid(4, 0.1), np.ones((4, 4))))
    with pytest.raises(TensorFormatError, match="Expected a image"):
        load_image(tmp_path / "scene.csas")

# %% pts/tests/test_io.pct.py 20
def test_image_kind_round_trip(tmp_path):
    """Images carry their kind tag."""
    img = ComplexImage(np.ones((4, 4), dtype=complex), build_grid(4, 0.1))
    save_image(tmp_path / "f.csas", img, kind="field", method="gd")
    back, meta = load_image(tmp_path / "f.csas", kind="field")
    assert meta["method"] == "gd"
    np.testing.assert_array_equal(back.data, img.data)

# %% pts/tests/test_io.pct.py 21
def test_field_records_provenance(tmp_path):
    """Saved fields carry sound speed, seed and the sweep band."""
    img = ComplexImage(np.ones((4, 4), dtype=complex), build_grid(4, 0.1))
    save_field(tmp_path / "f.csas", img, "wiener", c=1500.0, seed=7, f_start=30e3, f_stop=10e3)
    _, meta = load_image(tmp_path / "f.csas", kind="field")
    assert meta["method"] == "wiener"
    assert float(meta["c"]) == 1500.0
    assert int(meta["seed"]) == 7
    assert (float(meta["f_start"]), float(meta["f_stop"])) == (30e3, 10e3)

def test_field_provenance_required(tmp_path):
    """Fields cannot be saved without their provenance keys."""
    img = ComplexImage(np.ones((4, 4), dtype=complex), build_grid(4, 0.1))
    with pytest.raises(TypeError):
        save_field(tmp_path / "f.csas", img, "wiener", c=1500.0)

# %% pts/tests/test_io.pct.py 22
def test_checkpoint_round_trip(tmp_path):
    """Network checkpoints restore within single precision."""
    rng = np.random.default_rng(3)
    enc = make_encoding(4, 10.0, rng)
    params = init_mlp(8, 6, rng)
    save_checkpoint(tmp_path / "ckpt.csas", enc, params)
    enc2, params2 = load_checkpoint(tmp_path / "ckpt.csas")
    assert enc2.kappa == 10.0
    np.testing.assert_allclose(enc2.b_matrix, enc.b_matrix, rtol=1e-6)
    for a, b in zip(params.arrays(), params2.arrays()):
        np.testing.assert_allclose(b, a, rtol=1e-6, atol=1e-7)

# %% pts/tests/test_io.pct.py 23
def test_checkpoint_rejects_other_tensors(tmp_path):
    """A non-checkpoint tensor is a format error."""
    write_tensor(tmp_path / "x.csas", np.zeros(4), {"kind": "image"})
    with pytest.raises(TensorFormatError, match="Invalid checkpoint"):
        load_checkpoint(tmp_path / "x.csas")

# %% pts/tests/test_io.pct.py 24
def test_metrics_csv_round_trip(tmp_path):
    """Rows survive, infinite noise PSNR included."""
    reports = [
        MetricReport(21.5, 0.61, "gd", "ripples", 8.0),
        MetricReport(18.0, 0.4, "das", "ripples", 8.0, noise_psnr_db=20.0),
    ]
    write_metrics_csv(tmp_path / "m.csv", reports)
    back = read_metrics_csv(tmp_path / "m.csv")
    assert [r.method for r in back] == ["gd", "das"]
    assert back[0].noise_psnr_db == math.inf
    assert back[1].psnr_db == 18.0
    header = (tmp_path / "m.csv").read_text().splitlines()[0]
    assert header == "scene,method,noise_psnr_db,psnr_db,ssim"

# %% pts/tests/test_io.pct.py 26
def test_uint8_mapping():
    """Peak → 255, the floor and below → 0, half the range → 128."""
    img = ComplexImage(np.array([[1.0, 1.001 * 10 ** (-30 / 20)], [1e-4, 0.0]]), build_grid(2, 1.0))
    np.testing.assert_array_equal(to_uint8(img, -60.0), [[255, 128], [0, 0]])

# %% pts/tests/test_io.pct.py 27
def test_export_png_reads_back(tmp_path):
    """The written PNG holds the 8-bit log-magnitude image."""
    img = ComplexImage(np.array([[1.0, 1.001 * 10 ** (-30 / 20)], [1e-4, 0.0]]), build_grid(2, 1.0))
    export_png(img, -60.0, tmp_path / "sub" / "a.png")
    back = iio.imread(tmp_path / "sub" / "a.png")
    assert back.dtype == np.uint8
    np.testing.assert_array_equal(back, [[255, 128], [0, 0]])

# %% pts/tests/test_io.pct.py 28
def test_export_png_grid(tmp_path):
    """Tiles sit side by side with a gap."""
    grid = build_grid(4, 1.0)
    images = [ComplexImage(np.ones((4, 4)), grid), ComplexImage(np.ones((4, 4)), grid)]
    export_png_grid(images, -40.0, tmp_path / "g.png", gap=2)
    back = iio.imread(tmp_path / "g.png")
    assert back.shape == (4, 10)
    assert np.all(back[:, 4:6] == 0) and np.all(back[:, :4] == 255)
    with pytest.raises(ValueError, match="No images"):
        export_png_grid([], -40.0, tmp_path / "h.png")

# %% pts/tests/test_io.pct.py 29
def test_export_phase_png(tmp_path):
    """Phase −π..π maps onto 0..255 with zero phase at mid-gray."""
    img = ComplexImage(np.array([[1.0, 1j], [-1j, -1.0]]), build_grid(2, 1.0))
    np.testing.assert_array_equal(phase_to_uint8(img), [[128, 191], [64, 255]])
    export_phase_png(img, tmp_path / "p.png")
    np.testing.assert_array_equal(iio.imread(tmp_path / "p.png"), phase_to_uint8(img))
