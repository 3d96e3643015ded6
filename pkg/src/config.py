"""
Runtime settings and numeric tolerances for the Charge Qubit Gate Control Toolkit.
"""

import logging
from functools import lru_cache
from pathlib import Path

import yaml
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).parent.parent
ARTIFACT_VERSION = "1.0.0"


class Settings(BaseSettings):
    """Process-level settings, overridable through CHARGEQ_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="CHARGEQ_", env_file=".env", extra="ignore")

    threads: int = 1
    output_dir: Path = Path("runs")
    log_level: str = "INFO"
    defaults_path: Path = PROJECT_ROOT / "config" / "defaults.yaml"


def _default_tolerances() -> dict:
    """Built-in tolerances used when config/defaults.yaml is missing."""
    return {
        "operators": {"hermiticity": 1e-12, "unitarity": 1e-10, "orthonormality": 1e-12},
        "warnings": {"dt_norm": 0.1, "charge_regime": 0.5},
        "noise": {"max_flip_probability": 0.1},
        "krotov": {"monotonicity_slack": 1e-10, "log_every": 25},
        "gradient": {"step": 1e-5, "probes": 8},
    }


def load_defaults(path: Path | None = None) -> dict:
    """Load tolerances from YAML, falling back to the built-in values."""
    config_path = Path(path) if path is not None else Settings().defaults_path
    defaults = _default_tolerances()
    try:
        with open(config_path, "r") as f:
            loaded = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as exc:
        logger.warning("Using built-in tolerances, could not read %s: %s", config_path, exc)
        return defaults

    for section, values in loaded.items():
        defaults.setdefault(section, {}).update(values or {})
    return defaults


@lru_cache(maxsize=1)
def get_tolerances() -> dict:
    """Process-wide tolerance table."""
    return load_defaults()


def tolerance(section: str, key: str) -> float:
    """Single tolerance value, e.g. ``tolerance("operators", "unitarity")``."""
    return get_tolerances()[section][key]
