# AUTOGENERATED! DO NOT EDIT! File to edit: pts/tests/test_config.pct.py

__all__ = ['CONFIGS_DIR', 'test_apply_overrides', 'test_apply_overrides_unknown_key', 'test_bundled_configs_load', 'test_config_hash', 'test_defaults_match_simulation_setup', 'test_demo_config', 'test_demo_toml_matches_demo_config', 'test_gd_config_validation', 'test_infinite_noise_survives_toml', 'test_invalid_values_rejected', 'test_load_malformed_toml', 'test_load_missing_file', 'test_parse_override_value', 'test_parse_overrides_bad_flag', 'test_parse_overrides_odd_count', 'test_parse_overrides_pairs', 'test_save_load_roundtrip', 'test_save_strips_none_values', 'test_sinr_config_validation', 'test_solver_section_validation_wrapped', 'test_unknown_method_lists_valid_methods', 'test_unknown_section_key_rejected', 'test_unknown_section_rejected', 'test_worker_count']

# %% pts/tests/test_config.pct.py 3
import math
from pathlib import Path

import pytest

from csas.config import (
    ConfigError, GdConfig, RunConfig, SceneConfig, SinrConfig,
    apply_overrides, config_hash, demo_config, load_run_config, parse_override_value, parse_overrides,
    run_config_from_dict, save_run_config, worker_count,
)

# %% pts/tests/test_config.pct.py 5
def test_defaults_match_simulation_setup():
    """Default manifest: 400×400 over 0.8 m, ring r=1 m h=1 m, 30→10 kHz at 100 kHz."""
    cfg = RunConfig()
    assert (cfg.scene.n, cfg.scene.extent) == (400, 0.8)
    assert (cfg.ring.radius, cfg.ring.height, cfg.ring.n_angles) == (1.0, 1.0, 360)
    assert (cfg.waveform.f_start, cfg.waveform.f_stop, cfg.waveform.fs) == (30e3, 10e3, 100e3)
    assert cfg.medium.sound_speed == 343.0
    assert math.isinf(cfg.noise.psnr_db)

# %% pts/tests/test_config.pct.py 6
def test_save_load_roundtrip(tmp_path):
    """Save then load produces the same config."""
    p = tmp_path / "run.toml"
    cfg = demo_config(str(tmp_path / "out"))
    save_run_config(cfg, p)
    assert load_run_config(p) == cfg

# %% pts/tests/test_config.pct.py 7
def test_save_strips_none_values(tmp_path):
    """None fields (scene.path, method.mask_radius) are omitted from the TOML file."""
    p = tmp_path / "run.toml"
    save_run_config(RunConfig(), p)
    text = p.read_text()
    assert "path" not in text
    assert "mask_radius" not in text
    assert "relaxation" not in text

# %% pts/tests/test_config.pct.py 8
def test_infinite_noise_survives_toml(tmp_path):
    """inf PSNR values are written as TOML inf and read back."""
    p = tmp_path / "run.toml"
    save_run_config(RunConfig(), p)
    loaded = load_run_config(p)
    assert math.isinf(loaded.noise.psnr_db)
    assert math.isinf(loaded.sweep.noise_psnr_db[0])

# %% pts/tests/test_config.pct.py 9
def test_load_missing_file(tmp_path):
    """Missing config file raises ConfigError."""
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(tmp_path / "nope.toml")

# %% pts/tests/test_config.pct.py 10
def test_load_malformed_toml(tmp_path):
    """Malformed TOML raises ConfigError."""
    p = tmp_path / "bad.toml"
    p.write_text("[scene\nn = ")
    with pytest.raises(ConfigError, match="Malformed"):
        load_run_config(p)

# %% pts/tests/test_config.pct.py 12
def test_unknown_section_rejected():
    """Unknown top-level keys are rejected."""
    with pytest.raises(ConfigError, match="Unknown key"):
        run_config_from_dict({"scenery": {}})

# %% pts/tests/test_config.pct.py 13
def test_unknown_section_key_rejected():
    """Unknown keys inside a section list the valid keys."""
    with pytest.raises(ConfigError, match=r"Unknown key\(s\) in \[ring\]: radus"):
        run_config_from_dict({"ring": {"radus": 2.0}})

# %% pts/tests/test_config.pct.py 14
def test_unknown_method_lists_valid_methods():
    """An unknown method name lists every valid method."""
    with pytest.raises(ConfigError, match="Valid methods: inverse, wiener, gd, gd-tv, gd-grad, bremen, sinr"):
        run_config_from_dict({"method": {"name": "dip"}})

# %% pts/tests/test_config.pct.py 15
@pytest.mark.parametrize("raw", [
    {"scene": {"kind": "forest"}},
    {"scene": {"n": 1}},
    {"ring": {"n_angles": 0}},
    {"medium": {"sound_speed": 0}},
    {"beamform": {"floor_db": 10}},
    {"seed": -1},
    {"sweep": {"methods": ["wiener", "nope"]}},
    {"quadrant": {"method": "bremen"}},
    {"scene": {"base": "gravel"}},
])
def test_invalid_values_rejected(raw):
    """Out-of-range values raise ConfigError."""
    with pytest.raises(ConfigError):
        run_config_from_dict(raw)

# %% pts/tests/test_config.pct.py 16
def test_solver_section_validation_wrapped():
    """Solver dataclass validation surfaces as ConfigError naming the section."""
    with pytest.raises(ConfigError, match=r"Invalid \[gd\]"):
        run_config_from_dict({"gd": {"momentum": 1.0}})

# %% pts/tests/test_config.pct.py 17
def test_gd_config_validation():
    """GdConfig rejects non-positive learning rates and unknown regularizers."""
    with pytest.raises(ValueError, match="learning_rate"):
        GdConfig(learning_rate=0)
    with pytest.raises(ValueError, match="regularizer"):
        GdConfig(regularizer="l1")

# %% pts/tests/test_config.pct.py 18
def test_sinr_config_validation():
    """SinrConfig requires positive sizes."""
    with pytest.raises(ValueError, match="features"):
        SinrConfig(features=0)
    with pytest.raises(ValueError, match="kappa"):
        SinrConfig(kappa=0)

# %% pts/tests/test_config.pct.py 20
@pytest.mark.parametrize("text,expected", [
    ("10", 10),
    ("0.5", 0.5),
    ("inf", math.inf),
    ("true", True),
    ('"sinr"', "sinr"),
    ("sinr", "sinr"),
    ("gd-tv", "gd-tv"),
    ("[1, 10]", [1, 10]),
])
def test_parse_override_value(text, expected):
    """Override values are TOML literals, falling back to bare strings."""
    assert parse_override_value(text) == expected

# %% pts/tests/test_config.pct.py 21
def test_parse_overrides_pairs():
    """--section.key value pairs become dotted keys; dashes map to underscores."""
    out = parse_overrides(["--gd.iterations", "10", "--ring.n-angles", "90", "--seed", "3"])
    assert out == {"gd.iterations": 10, "ring.n_angles": 90, "seed": 3}

# %% pts/tests/test_config.pct.py 22
def test_parse_overrides_odd_count():
    """A flag without a value is rejected."""
    with pytest.raises(ConfigError, match="pairs"):
        parse_overrides(["--gd.iterations"])

# %% pts/tests/test_config.pct.py 23
def test_parse_overrides_bad_flag():
    """Values in flag position are rejected."""
    with pytest.raises(ConfigError, match="Invalid override flag"):
        parse_overrides(["gd.iterations", "10"])

# %% pts/tests/test_config.pct.py 24
def test_apply_overrides():
    """Overrides replace file values and revalidate."""
    cfg = apply_overrides(RunConfig(), {"scene.kind": "sparse", "scene.n": 32, "seed": 7})
    assert cfg.scene == SceneConfig(kind="sparse", n=32)
    assert cfg.seed == 7

# %% pts/tests/test_config.pct.py 25
def test_apply_overrides_unknown_key():
    """Overrides of unknown keys fail like file keys do."""
    with pytest.raises(ConfigError, match="Unknown key"):
        apply_overrides(RunConfig(), {"scene.colour": "red"})
    with pytest.raises(ConfigError, match="Unknown section"):
        apply_overrides(RunConfig(), {"lighting.gain": 1})
    with pytest.raises(ConfigError, match="Top-level keys"):
        apply_overrides(RunConfig(), {"threads": 4})

# %% pts/tests/test_config.pct.py 27
def test_demo_config():
    """Bundled demo: 64×64 sparse scene, 180 angles."""
    cfg = demo_config()
    assert (cfg.scene.kind, cfg.scene.n) == ("sparse", 64)
    assert cfg.ring.n_angles == 180

# %% pts/tests/test_config.pct.py 28
CONFIGS_DIR = Path(__file__).resolve().parents[2] / "configs"

@pytest.mark.parametrize("name", ["demo.toml", "quadrants.toml", "specular_diffuse.toml"])
def test_bundled_configs_load(name):
    """Checked-in manifests parse and validate."""
    load_run_config(CONFIGS_DIR / name)

def test_demo_toml_matches_demo_config():
    """configs/demo.toml describes the same scene and ring as demo_config()."""
    cfg, ref = load_run_config(CONFIGS_DIR / "demo.toml"), demo_config()
    assert cfg.scene == ref.scene
    assert cfg.ring == ref.ring
    assert cfg.waveform == ref.waveform

# %% pts/tests/test_config.pct.py 29
def test_worker_count(monkeypatch):
    """CSAS_THREADS sets the pool size, at least one."""
    monkeypatch.delenv("CSAS_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("CSAS_THREADS", "4")
    assert worker_count() == 4
    monkeypatch.setenv("CSAS_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("CSAS_THREADS", "many")
    with pytest.raises(ConfigError):
        worker_count()

# %% pts/tests/test_config.pct.py 30
def test_config_hash():
    """The hash ignores excluded keys and tracks everything else."""
    a = demo_config("runs/a")
    assert config_hash(a) == config_hash(demo_config("runs/b"))
    assert len(config_hash(a)) == 16
    assert config_hash(a) != config_hash(apply_overrides(a, {"wiener.alpha": 0.5}))
    changed_sweep = apply_overrides(a, {"sweep.methods": ["wiener"]})
    assert config_hash(a) != config_hash(changed_sweep)
    assert config_hash(a, exclude=("output_dir", "sweep")) == config_hash(changed_sweep, exclude=("output_dir", "sweep"))
