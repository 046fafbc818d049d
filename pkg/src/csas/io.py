# AUTOGENERATED! DO NOT EDIT! File to edit: pts/csas/09_io.pct.py

__all__ = ['DTYPE_COMPLEX', 'DTYPE_REAL', 'MAGIC', 'TensorFormatError', 'VERSION', 'decode_tensor', 'encode_tensor', 'export_phase_png', 'export_png', 'export_png_grid', 'load_checkpoint', 'load_image', 'load_pings', 'load_psf', 'load_scene', 'phase_to_uint8', 'read_metrics_csv', 'read_tensor', 'save_checkpoint', 'save_field', 'save_image', 'save_pings', 'save_psf', 'save_scene', 'to_uint8', 'write_metrics_csv', 'write_tensor']

# %% pts/csas/09_io.pct.py 3
import csv
import struct
from pathlib import Path

import imageio.v3 as iio
import numpy as np

from .beamformer import ComplexImage, log_magnitude
from .geometry import SceneGrid, build_ring
from .inr import FourierEncoding, MlpParams, pack_sinr, unpack_sinr
from .metrics import CSV_COLUMNS, MetricReport
from .psf import Psf
from .simulator import PingSet, ScatterScene

# %% pts/csas/09_io.pct.py 5
MAGIC = b"CSAS"
VERSION = 1
DTYPE_REAL = 0
DTYPE_COMPLEX = 1

_HEAD = struct.Struct("<4sHHI")
_DISK_DTYPES = {DTYPE_REAL: np.dtype("<f4"), DTYPE_COMPLEX: np.dtype("<c8")}

class TensorFormatError(ValueError):
    """Malformed, truncated or unsupported tensor file."""

# %% pts/csas/09_io.pct.py 6
def _encode_metadata(metadata: dict[str, object] | None) -> bytes:
    lines = []
    for key, value in (metadata or {}).items():
        text = repr(value) if isinstance(value, float) else str(value)
        if "=" in key or "\n" in key or "\n" in text:
            raise ValueError(f"Invalid metadata entry {key!r}={text!r}")
        lines.append(f"{key}={text}")
    return "\n".join(lines).encode("utf-8")

def _decode_metadata(raw: bytes) -> dict[str, str]:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise TensorFormatError(f"Metadata is not valid UTF-8: {e}")
    meta = {}
    for line in filter(None, text.split("\n")):
        if "=" not in line:
            raise TensorFormatError(f"Malformed metadata line: {line!r}")
        key, value = line.split("=", 1)
        meta[key] = value
    return meta

# %% pts/csas/09_io.pct.py 7
def encode_tensor(data: np.ndarray, metadata: dict[str, object] | None = None) -> bytes:
    arr = np.asarray(data)
    if np.issubdtype(arr.dtype, np.complexfloating):
        tag = DTYPE_COMPLEX
    elif np.issubdtype(arr.dtype, np.floating):
        tag = DTYPE_REAL
    else:
        raise ValueError(f"Unsupported dtype {arr.dtype}: only real or complex floats can be stored")
    meta = _encode_metadata(metadata)
    head = _HEAD.pack(MAGIC, VERSION, tag, arr.ndim)
    head += struct.pack(f"<{arr.ndim}I", *arr.shape)
    head += struct.pack("<I", len(meta))
    payload = np.ascontiguousarray(arr, dtype=_DISK_DTYPES[tag]).tobytes()
    return head + meta + payload

def decode_tensor(raw: bytes) -> tuple[np.ndarray, dict[str, str]]:
    if len(raw) < _HEAD.size:
        raise TensorFormatError(f"Truncated header: {len(raw)} bytes")
    magic, version, tag, rank = _HEAD.unpack_from(raw, 0)
    if magic != MAGIC:
        raise TensorFormatError(f"Bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise TensorFormatError(f"Unsupported version {version}")
    if tag not in _DISK_DTYPES:
        raise TensorFormatError(f"Unknown dtype tag {tag}")
    offset = _HEAD.size
    if len(raw) < offset + 4 * rank + 4:
        raise TensorFormatError("Truncated header: dims missing")
    dims = struct.unpack_from(f"<{rank}I", raw, offset)
    offset += 4 * rank
    (meta_len,) = struct.unpack_from("<I", raw, offset)
    offset += 4
    if len(raw) < offset + meta_len:
        raise TensorFormatError("Truncated metadata")
    meta = _decode_metadata(raw[offset:offset + meta_len])
    offset += meta_len
    dtype = _DISK_DTYPES[tag]
    expected = int(np.prod(dims, dtype=np.int64)) * dtype.itemsize
    if len(raw) - offset != expected:
        raise TensorFormatError(f"Payload is {len(raw) - offset} bytes, dims {dims} need {expected}")
    data = np.frombuffer(raw, dtype=dtype, offset=offset).reshape(dims)
    wide = np.complex128 if tag == DTYPE_COMPLEX else np.float64
    return data.astype(wide), meta

# %% pts/csas/09_io.pct.py 8
def write_tensor(path: Path | str, data: np.ndarray, metadata: dict[str, object] | None = None) -> None:
    """Write *data* and its metadata as a tensor file."""
    raw = encode_tensor(data, metadata)
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_bytes(raw)

def read_tensor(path: Path | str) -> tuple[np.ndarray, dict[str, str]]:
    """Read a tensor file; returns (f64 or c128 array, metadata)."""
    return decode_tensor(Path(path).read_bytes())

# %% pts/csas/09_io.pct.py 10
def _grid_meta(grid: SceneGrid) -> dict[str, object]:
    return {"n": grid.n, "extent": grid.extent, "z0": grid.z0}

def _grid_from(meta: dict[str, str]) -> SceneGrid:
    try:
        return SceneGrid(int(meta["n"]), float(meta["extent"]), float(meta["z0"]))
    except KeyError as e:
        raise TensorFormatError(f"Missing metadata key {e}")

def _expect_kind(meta: dict[str, str], kind: str) -> None:
    if meta.get("kind") != kind:
        raise TensorFormatError(f"Expected a {kind} tensor, got {meta.get('kind')!r}")

# %% pts/csas/09_io.pct.py 11
def save_scene(path, scene: ScatterScene, **extra) -> None:
    """Rank-3 stack: [σ, φ]; φ is zero when the scene has no phase map."""
    phase = scene.phase if scene.phase is not None else np.zeros_like(scene.sigma)
    meta = {"kind": "scene", **_grid_meta(scene.grid), "has_phase": int(scene.phase is not None), **extra}
    write_tensor(path, np.stack([scene.sigma, phase]).astype(float), meta)

def load_scene(path) -> ScatterScene:
    data, meta = read_tensor(path)
    _expect_kind(meta, "scene")
    phase = data[1] if meta.get("has_phase") == "1" else None
    return ScatterScene(_grid_from(meta), np.maximum(data[0], 0.0), phase)

# %% pts/csas/09_io.pct.py 12
def save_pings(path, pings: PingSet, **extra) -> None:
    meta = {
        "kind": "pings", "fs": pings.fs, "t0": pings.t0,
        "radius": pings.ring.radius, "height": pings.ring.height, "n_angles": pings.ring.n_angles,
        **extra,
    }
    write_tensor(path, pings.pings, meta)

def load_pings(path) -> tuple[PingSet, dict[str, str]]:
    data, meta = read_tensor(path)
    _expect_kind(meta, "pings")
    ring = build_ring(float(meta["radius"]), float(meta["height"]), int(meta["n_angles"]))
    return PingSet(data, float(meta["fs"]), float(meta["t0"]), ring), meta

# %% pts/csas/09_io.pct.py 13
def save_image(path, img: ComplexImage, kind: str = "image", **extra) -> None:
    write_tensor(path, img.data.astype(complex), {"kind": kind, **_grid_meta(img.grid), **extra})

def save_field(
    path, field: ComplexImage, method: str, *, c: float, seed: int, f_start: float, f_stop: float, **extra,
) -> None:
    """Deconvolved field with the sound speed, seed and sweep band it was produced under."""
    save_image(path, field, kind="field", method=method, c=c, seed=seed, f_start=f_start, f_stop=f_stop, **extra)

def load_image(path, kind: str = "image") -> tuple[ComplexImage, dict[str, str]]:
    data, meta = read_tensor(path)
    _expect_kind(meta, kind)
    return ComplexImage(data, _grid_from(meta)), meta

def save_psf(path, psf: Psf, **extra) -> None:
    save_image(path, psf.image, kind="psf", f_start=psf.f_start, f_stop=psf.f_stop,
               center_row=psf.center[0], center_col=psf.center[1], **extra)

def load_psf(path) -> Psf:
    img, meta = load_image(path, kind="psf")
    return Psf(img, float(meta["f_start"]), float(meta["f_stop"]), (int(meta["center_row"]), int(meta["center_col"])))

# %% pts/csas/09_io.pct.py 14
def save_checkpoint(path, enc: FourierEncoding, params: MlpParams, **extra) -> None:
    vector, meta = pack_sinr(enc, params)
    write_tensor(path, vector, {**meta, **extra})

def load_checkpoint(path) -> tuple[FourierEncoding, MlpParams]:
    data, meta = read_tensor(path)
    try:
        return unpack_sinr(data, meta)
    except (KeyError, ValueError) as e:
        raise TensorFormatError(f"Invalid checkpoint {path}: {e}")

# %% pts/csas/09_io.pct.py 16
def write_metrics_csv(path, reports: list[MetricReport]) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in reports:
            writer.writerow(r.as_row())

def read_metrics_csv(path) -> list[MetricReport]:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return [
        MetricReport(
            psnr_db=float(r["psnr_db"]), ssim=float(r["ssim"]), method=r["method"],
            scene=r["scene"], mask_radius=float("nan"), noise_psnr_db=float(r["noise_psnr_db"]),
        )
        for r in rows
    ]

# %% pts/csas/09_io.pct.py 18
def to_uint8(img: ComplexImage, floor_db: float = -60.0) -> np.ndarray:
    lm = log_magnitude(img, floor_db)
    return np.rint((lm - floor_db) / (-floor_db) * 255).astype(np.uint8)

def export_png(img: ComplexImage, floor_db: float, path) -> None:
    """8-bit grayscale PNG of the image's log magnitude."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    iio.imwrite(p, to_uint8(img, floor_db))

def phase_to_uint8(img: ComplexImage) -> np.ndarray:
    """Phase in [−π, π] mapped linearly onto 0..255."""
    return np.rint((np.angle(img.data) + np.pi) / (2 * np.pi) * 255).astype(np.uint8)

def export_phase_png(img: ComplexImage, path) -> None:
    """8-bit grayscale PNG of the image phase."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    iio.imwrite(p, phase_to_uint8(img))

def export_png_grid(images: list[ComplexImage], floor_db: float, path, cols: int | None = None, gap: int = 2) -> None:
    """Tile several images (each on its own log scale) into one PNG."""
    if not images:
        raise ValueError("No images to tile")
    cols = cols or len(images)
    rows = -(-len(images) // cols)
    n = max(im.data.shape[0] for im in images)
    canvas = np.zeros((rows * n + (rows - 1) * gap, cols * n + (cols - 1) * gap), dtype=np.uint8)
    for k, im in enumerate(images):
        r, c = divmod(k, cols)
        tile = to_uint8(im, floor_db)
        y, x = r * (n + gap), c * (n + gap)
        canvas[y:y + tile.shape[0], x:x + tile.shape[1]] = tile
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    iio.imwrite(p, canvas)
