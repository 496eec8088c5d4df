import json
from pathlib import Path
from typing import Optional

import yaml
from typing_extensions import TypedDict

from .exceptions import ConfigError
from .utils import logger


class HarmsyncConfig(TypedDict):
    """Configuration type definition."""
    LOG_LEVEL: str
    REPORT_FORMAT: str
    FLOAT_DIGITS: int
    SIM_T_END: float
    SIM_DT: Optional[float]
    SIM_RECORD_STRIDE: int
    SIM_SEED: int
    SHOW_PROGRESS: bool
    VERIFY_SAMPLES: int
    VERIFY_SEED: int


DEFAULT_CONFIG: HarmsyncConfig = {
    "LOG_LEVEL": "INFO",
    "REPORT_FORMAT": "json",
    "FLOAT_DIGITS": 17,
    "SIM_T_END": 2000.0,
    "SIM_DT": None,
    "SIM_RECORD_STRIDE": 10,
    "SIM_SEED": 0,
    "SHOW_PROGRESS": True,
    "VERIFY_SAMPLES": 100,
    "VERIFY_SEED": 2024,
}

REPORT_FORMATS = ("json", "md")

# Constants for the symmetric and complex eigensolvers
SYMMETRY_TOL = 1e-12
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
QR_MAX_ITER_PER_EIGENVALUE = 60
RANK_TOL = 1e-10
SPD_MIN_EIGENVALUE = 1e-12
RESIDUAL_TOL = 1e-8

# Constants for the synchronization tests
SYNC_TOL = 1e-8
CLUSTER_TOL = 1e-7
CONSENSUS_MIN_DISTANCE = 1e-6

# Constants for time-domain corroboration
STABILITY_FACTOR = 0.05
SYNC_RATIO = 0.5
PERSISTENT_RATIO = 0.9
MIN_PERIODS = 20
CLASSIFY_FLOOR = 1e-12


def load_config(config_file: Optional[str] = None) -> HarmsyncConfig:
    """Load configuration from a JSON or YAML file on top of the defaults."""
    config = DEFAULT_CONFIG.copy()
    if not config_file:
        return config

    path = Path(config_file)
    try:
        with open(path, encoding="utf-8") as f:
            if path.suffix == ".json":
                user_config = json.load(f)
            elif path.suffix in (".yaml", ".yml"):
                user_config = yaml.safe_load(f) or {}
            else:
                raise ConfigError("Config file must be .json or .yaml")
    except (OSError, ValueError, yaml.YAMLError) as e:
        raise ConfigError(f"Failed to load config file {config_file}: {e}") from e

    if not isinstance(user_config, dict):
        raise ConfigError(f"Config file {config_file} must contain a mapping")

    for key in sorted(set(user_config) - set(DEFAULT_CONFIG)):
        logger.warning(f"Ignoring unknown config key {key!r}")
        user_config.pop(key)

    config.update(user_config)
    if config["REPORT_FORMAT"] not in REPORT_FORMATS:
        raise ConfigError(f"REPORT_FORMAT must be one of {REPORT_FORMATS}")
    logger.info(f"Loaded configuration from {config_file}")
    return config
