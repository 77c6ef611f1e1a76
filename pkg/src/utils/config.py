import copy
import hashlib
import json
import os
import yaml
from typing import Dict, Any, Optional

from pydantic import ValidationError

from ..errors import ConfigError
from ..scenario import ExperimentSettings, OptimizerSettings, ScenarioConfig

CONFIG_ENV_VAR = "USRIS_CONFIG"


class Config:
    """Configuration management for the US-RIS simulator."""

    DEFAULT_CONFIG_PATH = "config/config.yaml"

    DEFAULT_CONFIG: Dict[str, Any] = {
        "scenario": {
            "frequency_hz": 2.5e9,
            "noise_power_w": 1.0e-6,
            "kappa": 0.8,
            "p_max_dbw": 0.0,
            "element_size_m": None,
            "user_array": {"count": 2, "center": [0.0, 0.0, 0.0], "axis": [1.0, 0.0, 0.0],
                           "spacing_m": None},
            "bs_array": {"count": 8, "center": [0.0, 20.0, 0.0], "axis": [1.0, 0.0, 0.0],
                         "spacing_m": None},
            "multi_layer": {"layers": 2, "cols": 8, "rows": 12, "depths_m": [0.02, 0.02]},
            "single_layer": {"cols": 12, "rows": 16, "depth_m": 0.02},
        },
        "optimizer": {"tolerance": 1.0e-6, "max_iters": 100, "restarts": 8, "seed": 2024,
                      "workers": 1},
        "experiments": {
            "variants": ["multi-layer", "single-layer-us", "single-layer-bss", "none"],
            "snr_sweep": {"start_dbw": -10.0, "stop_dbw": 20.0, "step_db": 2.0},
            "convergence": {"p_max_dbw": 0.0},
            "power_distribution": {"epsilon": 1.0 / 6.0},
            "pattern": {"start_deg": -90.0, "stop_deg": 90.0, "step_deg": 0.25},
            "amplitude_bound": {"b": 4, "a_m": 0.06, "d1_m": 0.02, "d2_m": 0.02,
                                "target_index": 10, "trials": 1000},
            "sinr": {"user_offsets_m": [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
                     "combiner": "per-user"},
            "dof_example": {"profiles": ["none", "random", "gradual"]},
        },
        "logging": {
            "level": "INFO",
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
    }

    def __init__(self, config_path: Optional[str] = None):
        """Initialize configuration from file, falling back to the built-in defaults."""
        self.config_path = (config_path or os.getenv(CONFIG_ENV_VAR)
                            or self.DEFAULT_CONFIG_PATH)
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file, merged over the defaults."""
        config = copy.deepcopy(self.DEFAULT_CONFIG)
        if not os.path.exists(self.config_path):
            return config

        try:
            with open(self.config_path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Cannot parse {self.config_path}: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError(f"{self.config_path} must hold a mapping at the top level")
        return self._merge(config, loaded)

    @classmethod
    def _merge(cls, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                base[key] = cls._merge(base[key], value)
            else:
                base[key] = value
        return base

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by dotted key."""
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict):
                value = value.get(k)
            else:
                return default

        return value if value is not None else default

    def set(self, key: str, value: Any) -> None:
        """Set configuration value in memory."""
        keys = key.split('.')
        config = self.config

        for k in keys[:-1]:
            config = config.setdefault(k, {})

        config[keys[-1]] = value

    def save(self, path: Optional[str] = None) -> str:
        """Write the current configuration as YAML."""
        path = path or self.config_path
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w') as f:
            yaml.safe_dump(self.config, f, sort_keys=False)
        return path

    def fingerprint(self) -> str:
        """First 16 hex chars of the SHA-256 of the canonical JSON form."""
        canonical = json.dumps(self.config, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]

    def _section(self, model, key: str):
        try:
            return model.model_validate(self.get(key, {}))
        except ValidationError as e:
            raise ConfigError(f"Invalid '{key}' section:\n{e}") from e

    def scenario_config(self) -> ScenarioConfig:
        return self._section(ScenarioConfig, "scenario")

    def optimizer_settings(self) -> OptimizerSettings:
        return self._section(OptimizerSettings, "optimizer")

    def experiment_settings(self) -> ExperimentSettings:
        return self._section(ExperimentSettings, "experiments")
