"""
Configuration management for travel-seg.

PipelineConfig holds every tunable threshold with its default. Config manages
the user defaults file in ~/.config/travel-seg, and resolve_config layers
defaults, user file, config file and command-line overrides.
"""

import dataclasses
import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

import yaml

from .errors import ConfigError

log = logging.getLogger(__name__)

CONFIG_ENV_VAR = "TRAVEL_CONFIG"
CONFIG_DIR_ENV_VAR = "TRAVEL_CONFIG_DIR"
SKIP_METRICS = ("boundary", "centroid")
USER_SETTINGS = {"jobs": int}


@dataclass(frozen=True)
class PipelineConfig:
    """Every named threshold of the pipeline."""

    # --- ground segmentation ---
    tgf_resolution: float = 8.0  # triangle grid cell side, meters
    incline_thresh: float = 30.0  # max plane inclination, degrees
    min_node_points: int = 10  # points per node
    eps1: float = 0.03  # radians
    eps2: float = 0.1  # radians per meter
    eps3: float = 0.1  # meters
    field_extent: float = 100.0  # half-width of the field, meters
    seed_multi_region: bool = False
    seed_ratio: float = 0.2
    seed_min_points: int = 3
    fit_iterations: int = 3
    ttmf_enabled: bool = True
    # --- object clustering ---
    t_horz: float = 0.3  # meters
    t_skip: int = 10  # intermediate nodes
    t_ring: int = 5  # rings
    t_vert: float = 0.5  # meters
    t_ext: int = 100  # columns
    proj_width: int = 1024
    proj_height: int = 64
    circular_linkage: bool = True
    vertical_linkage: bool = True
    skip_metric: str = "boundary"
    min_range: float = 0.0

    def validate(self) -> "PipelineConfig":
        """Raise ConfigError naming the first out-of-range field."""
        for name in ("tgf_resolution", "eps3", "field_extent", "t_horz", "t_vert"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        if not 0.0 < self.incline_thresh < 90.0:
            raise ConfigError("incline_thresh", f"must be in (0, 90) degrees, got {self.incline_thresh}")
        for name in ("eps1", "eps2"):
            if not getattr(self, name) > 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        if self.min_node_points < 1:
            raise ConfigError("min_node_points", f"must be >= 1, got {self.min_node_points}")
        if self.t_ring < 1:
            raise ConfigError("t_ring", f"must be >= 1, got {self.t_ring}")
        if self.t_skip < 0:
            raise ConfigError("t_skip", f"must be >= 0, got {self.t_skip}")
        if self.t_ext < 0:
            raise ConfigError("t_ext", f"must be >= 0, got {self.t_ext}")
        for name in ("proj_width", "proj_height"):
            if getattr(self, name) < 2:
                raise ConfigError(name, f"must be >= 2, got {getattr(self, name)}")
        if not 0.0 < self.seed_ratio <= 1.0:
            raise ConfigError("seed_ratio", f"must be in (0, 1], got {self.seed_ratio}")
        if self.seed_min_points < 3:
            raise ConfigError("seed_min_points", f"must be >= 3, got {self.seed_min_points}")
        if self.fit_iterations < 0:
            raise ConfigError("fit_iterations", f"must be >= 0, got {self.fit_iterations}")
        if self.skip_metric not in SKIP_METRICS:
            raise ConfigError("skip_metric", f"must be one of {', '.join(SKIP_METRICS)}, got {self.skip_metric!r}")
        if self.min_range < 0:
            raise ConfigError("min_range", f"must be >= 0, got {self.min_range}")
        return self

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def replace(self, **overrides) -> "PipelineConfig":
        """Copy with overrides applied (values coerced, result validated)."""
        return PipelineConfig.from_mapping(overrides, base=self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any], base: "PipelineConfig | None" = None) -> "PipelineConfig":
        """Build a validated config from (possibly string-typed) values layered on `base`."""
        base = base or cls()
        types = {f.name: f.type for f in fields(cls)}
        coerced = {}
        for key, raw in values.items():
            if key not in types:
                raise ConfigError(key, "unknown configuration key")
            coerced[key] = _coerce(key, types[key], raw)
        return dataclasses.replace(base, **coerced).validate()


def _coerce(key: str, type_name: Any, raw: Any) -> Any:
    type_name = type_name if isinstance(type_name, str) else type_name.__name__
    try:
        if type_name == "bool":
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in ("1", "true", "yes", "on"):
                return True
            if text in ("0", "false", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if type_name == "int":
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(f"not an integer: {raw!r}")
            return int(str(raw).strip()) if isinstance(raw, str) else int(raw)
        if type_name == "float":
            return float(raw)
        return str(raw).strip()
    except (TypeError, ValueError) as e:
        raise ConfigError(key, str(e)) from e


def parse_key_values(lines) -> dict[str, str]:
    """Parse flat `key=value` lines; blank lines and `#` comments are ignored."""
    values = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_config_file(path) -> dict[str, Any]:
    """Read a YAML mapping (.yaml/.yml) or a flat key=value file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(str(path), f"cannot read config file: {e}") from e
    if path.suffix.lower() in (".yaml", ".yml"):
        data = yaml.safe_load(text) or {}
        if not isinstance(data, dict):
            raise ConfigError(str(path), "YAML config must be a mapping")
        # The user defaults file nests pipeline values under `pipeline`.
        return dict(data.get("pipeline", data))
    return parse_key_values(text.splitlines())


class Config:
    """Manages the user defaults file for the travel CLI."""

    def __init__(self, config_dir: Path | None = None):
        config_dir = config_dir or os.environ.get(CONFIG_DIR_ENV_VAR)
        self.config_dir = Path(config_dir) if config_dir else Path.home() / ".config" / "travel-seg"
        self.config_file = self.config_dir / "config.yaml"
        self._ensure_config_exists()
        self.config = self._load_config()

    def _ensure_config_exists(self):
        """Create config directory and file if they don't exist."""
        self.config_dir.mkdir(parents=True, exist_ok=True)
        if not self.config_file.exists():
            default_config = {"pipeline": {}, "settings": {"jobs": 1}}
            with open(self.config_file, "w") as f:
                yaml.dump(default_config, f)

    def _load_config(self):
        with open(self.config_file, "r") as f:
            data = yaml.safe_load(f) or {}
        data.setdefault("pipeline", {})
        data.setdefault("settings", {})
        return data

    def _save_config(self):
        with open(self.config_file, "w") as f:
            yaml.dump(self.config, f)

    def pipeline_overrides(self) -> dict[str, Any]:
        """User-level PipelineConfig overrides."""
        return dict(self.config.get("pipeline") or {})

    def set_pipeline_value(self, key: str, value: Any):
        """Validate and persist a single PipelineConfig override."""
        checked = PipelineConfig.from_mapping({key: value})
        self.config["pipeline"][key] = getattr(checked, key)
        self._save_config()

    def reset(self):
        self.config["pipeline"] = {}
        self._save_config()

    def get_setting(self, setting, default=None):
        return self.config.get("settings", {}).get(setting, default)

    def set_setting(self, setting, value):
        """Persist a CLI setting (not a pipeline value), e.g. the default worker count."""
        if setting not in USER_SETTINGS:
            raise ConfigError(setting, f"unknown setting; known: {', '.join(USER_SETTINGS)}")
        try:
            value = USER_SETTINGS[setting](value)
        except (TypeError, ValueError):
            raise ConfigError(setting, f"cannot interpret {value!r}") from None
        if setting == "jobs" and value < 1:
            raise ConfigError(setting, f"must be >= 1, got {value}")
        self.config.setdefault("settings", {})[setting] = value
        self._save_config()


def resolve_config(
    user_config: Config | None = None,
    config_path: str | os.PathLike | None = None,
    overrides: Mapping[str, Any] | None = None,
    base: PipelineConfig | None = None,
) -> PipelineConfig:
    """
    Layer built-in defaults, user defaults, a config file and explicit overrides.

    The config file falls back to the TRAVEL_CONFIG environment variable.
    Given a `base` (a replayed run), only the explicit file and overrides go on top of it.
    """
    if base is not None:
        config = base
    else:
        config = PipelineConfig()
        if user_config is not None:
            config = PipelineConfig.from_mapping(user_config.pipeline_overrides(), base=config)
        config_path = config_path or os.environ.get(CONFIG_ENV_VAR)
    if config_path:
        log.info(f"Loading pipeline config from {config_path}")
        config = PipelineConfig.from_mapping(load_config_file(config_path), base=config)
    if overrides:
        config = PipelineConfig.from_mapping(overrides, base=config)
    return config.validate()
