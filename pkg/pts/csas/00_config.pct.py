# ---
# jupyter:
#   kernelspec:
#     display_name: .venv
#     language: python
#     name: python3
# ---

# %%
#|default_exp config

# %%
#|hide
from nblite import nbl_export; nbl_export();

# %% [markdown]
# # Configuration
#
# Run configuration for the csas experiments. A run is described by a flat
# TOML manifest with one table per concern:
#
# ```toml
# seed = 0
# output_dir = "runs/demo"
#
# [scene]
# kind = "sparse"
# n = 64
# extent = 0.2
#
# [ring]
# n_angles = 180
#
# [method]
# name = "wiener"
# ```
#
# Every table maps onto a dataclass below. Unknown tables or keys are
# rejected so that a typo never silently falls back to a default.

# %%
#|export
import hashlib
import math
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, asdict, fields
from pathlib import Path
from typing import Any

import tomli_w

# %% [markdown]
# ## Errors

# %%
#|export
class ConfigError(ValueError):
    """Raised for malformed or inconsistent run configuration."""

# %% [markdown]
# ## Algorithm configs
#
# These are consumed directly by `csas.deconv` and `csas.inr`, so they validate
# themselves on construction.

# %%
#|export
GD_REGULARIZERS = ("none", "tv", "gradient")
GD_INITS = ("das", "uniform")
GD_CONSTRAINTS = ("complex", "real", "nonnegative")

@dataclass(frozen=True)
class GdConfig:
    """Heavy-ball gradient descent settings.

    ``learning_rate`` is dimensionless: the step taken is
    ``learning_rate / L`` where ``L`` bounds the objective's curvature.
    """
    learning_rate: float = 1.0
    momentum: float = 0.9
    iterations: int = 500
    regularizer: str = "none"
    reg_weight: float = 1e-3
    eps_tv: float = 1e-6
    init: str = "das"
    init_scale: float = 0.1
    constraint: str = "complex"
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"Invalid learning_rate {self.learning_rate}: must be > 0")
        if not 0 <= self.momentum < 1:
            raise ValueError(f"Invalid momentum {self.momentum}: must be in [0, 1)")
        if self.iterations < 0:
            raise ValueError(f"Invalid iterations {self.iterations}: must be >= 0")
        if self.regularizer not in GD_REGULARIZERS:
            raise ValueError(f"Invalid regularizer '{self.regularizer}'. Valid: {', '.join(GD_REGULARIZERS)}")
        if self.reg_weight < 0:
            raise ValueError(f"Invalid reg_weight {self.reg_weight}: must be >= 0")
        if not self.eps_tv > 0:
            raise ValueError(f"Invalid eps_tv {self.eps_tv}: must be > 0")
        if self.init not in GD_INITS:
            raise ValueError(f"Invalid init '{self.init}'. Valid: {', '.join(GD_INITS)}")
        if self.constraint not in GD_CONSTRAINTS:
            raise ValueError(f"Invalid constraint '{self.constraint}'. Valid: {', '.join(GD_CONSTRAINTS)}")

# %%
#|export
@dataclass(frozen=True)
class SinrConfig:
    """Settings for the Fourier-feature network deconvolution."""
    kappa: float = 30.0
    features: int = 256         # M, number of Gaussian projections
    hidden_width: int = 128
    learning_rate: float = 1e-3
    iterations: int = 2000
    seed: int = 0

    def __post_init__(self):
        for name in ("kappa", "learning_rate"):
            if not getattr(self, name) > 0:
                raise ValueError(f"Invalid {name} {getattr(self, name)}: must be > 0")
        for name in ("features", "hidden_width"):
            if getattr(self, name) < 1:
                raise ValueError(f"Invalid {name} {getattr(self, name)}: must be >= 1")
        if self.iterations < 0:
            raise ValueError(f"Invalid iterations {self.iterations}: must be >= 0")

# %%
#|export
@dataclass(frozen=True)
class BremenConfig:
    """Successive-approximation settings. ``relaxation=None`` picks 1/max|H|."""
    relaxation: float | None = None
    iterations: int = 500

# %% [markdown]
# ## Run sections

# %%
#|export
SCENE_KINDS = ("ripples", "quadrants", "diffuse", "phase-grid", "sparse", "empty")
SCENE_BASES = ("ripples", "sparse", "uniform")
METHODS = ("inverse", "wiener", "gd", "gd-tv", "gd-grad", "bremen", "sinr")

@dataclass
class SceneConfig:
    """Scene grid and procedural scene parameters."""
    kind: str = "ripples"
    n: int = 400
    extent: float = 0.8         # meters
    z0: float = 0.0             # meters
    path: str | None = None     # load sigma/phase from a tensor file instead
    count: int = 40             # sparse: scatterer count
    cells: int = 4              # phase-grid: cells per side
    spacing: int = 4            # quadrants: lattice spacing in pixels
    base: str = "ripples"       # diffuse / phase-grid: magnitude pattern

@dataclass
class RingConfig:
    radius: float = 1.0
    height: float = 1.0
    n_angles: int = 360

@dataclass
class WaveformConfig:
    f_start: float = 30e3
    f_stop: float = 10e3
    duration: float = 1e-3
    fs: float = 100e3

@dataclass
class MediumConfig:
    sound_speed: float = 343.0

@dataclass
class BeamformConfig:
    oversample: int = 8
    floor_db: float = -60.0

@dataclass
class NoiseConfig:
    psnr_db: float = math.inf   # inf means noiseless

@dataclass
class MethodConfig:
    name: str = "wiener"
    mask_radius: float | None = None    # pixels; None → n/2

@dataclass
class InverseConfig:
    eps: float = 1e-8

@dataclass
class WienerConfig:
    alpha: float = 1e-2

@dataclass
class QuadrantConfig:
    method: str = "gd"
    iterations: int = 1500

@dataclass
class SweepConfig:
    noise_psnr_db: list[float] = field(default_factory=lambda: [math.inf, 25.0, 17.0])
    methods: list[str] = field(default_factory=lambda: ["wiener", "gd-tv"])
    kappas: list[float] = field(default_factory=list)
    learning_rates: list[float] = field(default_factory=list)

# %%
#|export
@dataclass
class RunConfig:
    """Top-level run manifest."""
    seed: int = 0
    output_dir: str = "runs/csas"
    scene: SceneConfig = field(default_factory=SceneConfig)
    ring: RingConfig = field(default_factory=RingConfig)
    waveform: WaveformConfig = field(default_factory=WaveformConfig)
    medium: MediumConfig = field(default_factory=MediumConfig)
    beamform: BeamformConfig = field(default_factory=BeamformConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    method: MethodConfig = field(default_factory=MethodConfig)
    inverse: InverseConfig = field(default_factory=InverseConfig)
    wiener: WienerConfig = field(default_factory=WienerConfig)
    gd: GdConfig = field(default_factory=GdConfig)
    bremen: BremenConfig = field(default_factory=BremenConfig)
    sinr: SinrConfig = field(default_factory=SinrConfig)
    quadrant: QuadrantConfig = field(default_factory=QuadrantConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

TOP_LEVEL_KEYS = ("seed", "output_dir")
SECTIONS: dict[str, type] = {
    f.name: f.default_factory for f in fields(RunConfig) if f.name not in TOP_LEVEL_KEYS
}

# %% [markdown]
# ## Bundled demo
#
# The desk-scale demo used throughout the tests: a 64×64 sparse scene over a
# 0.2 m patch, 180 looks and the 30→10 kHz chirp.

# %%
#|export
def demo_config(output_dir: str = "runs/demo") -> RunConfig:
    """Return the bundled 64×64 sparse demo configuration."""
    return RunConfig(
        seed=0,
        output_dir=output_dir,
        scene=SceneConfig(kind="sparse", n=64, extent=0.2, count=24),
        ring=RingConfig(n_angles=180),
    )

# %% [markdown]
# ## Validation

# %%
#|export
def _build_section(name: str, data: Any):
    cls = SECTIONS[name]
    if not isinstance(data, dict):
        raise ConfigError(f"[{name}] must be a table")
    valid = {f.name for f in fields(cls)}
    unknown = set(data) - valid
    if unknown:
        raise ConfigError(
            f"Unknown key(s) in [{name}]: {', '.join(sorted(unknown))}. "
            f"Valid keys: {', '.join(sorted(valid))}"
        )
    try:
        return cls(**data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid [{name}]: {e}")

# %%
#|export
def validate_run_config(cfg: RunConfig) -> RunConfig:
    """Check cross-field constraints. Returns *cfg* unchanged."""
    if cfg.scene.kind not in SCENE_KINDS:
        raise ConfigError(f"Unknown scene kind '{cfg.scene.kind}'. Valid kinds: {', '.join(SCENE_KINDS)}")
    if cfg.scene.base not in SCENE_BASES:
        raise ConfigError(f"Invalid scene base '{cfg.scene.base}'. Valid: {', '.join(SCENE_BASES)}")
    if cfg.method.name not in METHODS:
        raise ConfigError(f"Unknown method '{cfg.method.name}'. Valid methods: {', '.join(METHODS)}")
    if cfg.quadrant.method not in ("gd", "sinr"):
        raise ConfigError(f"Invalid quadrant method '{cfg.quadrant.method}'. Valid: gd, sinr")
    bad = [m for m in cfg.sweep.methods if m not in METHODS]
    if bad:
        raise ConfigError(f"Unknown sweep method(s): {', '.join(bad)}. Valid methods: {', '.join(METHODS)}")
    if not isinstance(cfg.seed, int) or cfg.seed < 0:
        raise ConfigError(f"Invalid seed {cfg.seed!r}: must be a non-negative integer")
    if cfg.scene.n < 2 or cfg.scene.extent <= 0:
        raise ConfigError("scene.n must be >= 2 and scene.extent > 0")
    if cfg.ring.n_angles < 1 or cfg.ring.radius <= 0:
        raise ConfigError("ring.n_angles must be >= 1 and ring.radius > 0")
    if cfg.medium.sound_speed <= 0:
        raise ConfigError("medium.sound_speed must be > 0")
    if cfg.beamform.oversample < 1 or cfg.beamform.floor_db >= 0:
        raise ConfigError("beamform.oversample must be >= 1 and beamform.floor_db < 0")
    return cfg

# %% [markdown]
# ## Load / Save

# %%
#|export
def run_config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from parsed TOML, rejecting unknown keys."""
    unknown = set(raw) - set(SECTIONS) - set(TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigError(
            f"Unknown key(s) at top level: {', '.join(sorted(unknown))}. "
            f"Valid: {', '.join(sorted(set(SECTIONS) | set(TOP_LEVEL_KEYS)))}"
        )
    kwargs: dict[str, Any] = {k: raw[k] for k in TOP_LEVEL_KEYS if k in raw}
    for name, data in raw.items():
        if name in SECTIONS:
            kwargs[name] = _build_section(name, data)
    return validate_run_config(RunConfig(**kwargs))

# %%
#|export
def load_run_config(path: Path | str) -> RunConfig:
    """Load a run manifest from TOML."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"Config file not found: {p}")
    try:
        with open(p, "rb") as f:
            raw = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Malformed config {p}: {e}")
    return run_config_from_dict(raw)

# %%
#|export
def run_config_to_dict(cfg: RunConfig) -> dict:
    """Plain-dict form of *cfg* with ``None`` values dropped (TOML has no null)."""
    raw = asdict(cfg)
    for name in SECTIONS:
        raw[name] = {k: v for k, v in raw[name].items() if v is not None}
    return raw

# %%
#|export
def save_run_config(cfg: RunConfig, path: Path | str) -> None:
    """Write the resolved manifest to TOML."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "wb") as f:
        tomli_w.dump(run_config_to_dict(cfg), f)

def config_hash(cfg: RunConfig, exclude: tuple[str, ...] = ("output_dir",)) -> str:
    """SHA-256 prefix of the canonical TOML manifest without the *exclude* keys and sections."""
    raw = {k: v for k, v in run_config_to_dict(cfg).items() if k not in exclude}
    return hashlib.sha256(tomli_w.dumps(raw).encode()).hexdigest()[:16]

# %% [markdown]
# ## Command-line overrides
#
# `--section.key value` pairs override file keys. Values are parsed as TOML
# literals, so `inf`, `[1, 10, 30]` and `true` work; anything else is kept as
# a string.

# %%
#|export
def parse_override_value(text: str) -> Any:
    """Parse a single override value as a TOML literal, falling back to str."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text

# %%
#|export
def parse_overrides(args: list[str]) -> dict[str, Any]:
    """Turn ``["--gd.iterations", "10", ...]`` into ``{"gd.iterations": 10}``."""
    if len(args) % 2:
        raise ConfigError(f"Overrides must come in '--key value' pairs, got: {' '.join(args)}")
    result = {}
    for flag, value in zip(args[::2], args[1::2]):
        if not flag.startswith("--") or len(flag) < 3:
            raise ConfigError(f"Invalid override flag '{flag}' (expected --section.key)")
        result[flag[2:].replace("-", "_")] = parse_override_value(value)
    return result

# %%
#|export
def apply_overrides(cfg: RunConfig, overrides: dict[str, Any]) -> RunConfig:
    """Return a copy of *cfg* with dotted-key overrides applied."""
    raw = run_config_to_dict(cfg)
    for key, value in overrides.items():
        if "." not in key:
            if key not in TOP_LEVEL_KEYS:
                raise ConfigError(f"Unknown override '--{key}'. Top-level keys: {', '.join(TOP_LEVEL_KEYS)}")
            raw[key] = value
            continue
        section, name = key.split(".", 1)
        if section not in SECTIONS:
            raise ConfigError(f"Unknown section '{section}' in override '--{key}'")
        raw[section][name] = value
    return run_config_from_dict(raw)

# %% [markdown]
# ## Worker pool size

# %%
#|export
def worker_count() -> int:
    """Worker pool size from ``CSAS_THREADS`` (default 1)."""
    raw = os.environ.get("CSAS_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"Invalid CSAS_THREADS '{raw}': must be an integer")
    return max(1, n)

# %% [markdown]
# ### Example

# %%
cfg = apply_overrides(demo_config(), {"gd.iterations": 10, "noise.psnr_db": 25.0})
cfg.gd.iterations, cfg.noise.psnr_db
