"""Helper utility functions."""

import math
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import yaml
from dotenv import load_dotenv

from utils.exceptions import ConfigurationError

DEFAULT_CONFIG_PATH = "config/config.yaml"


def load_config(config_path: str = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """
    Load project defaults from a YAML file.
    Automatically finds the project root by looking for config/config.yaml.
    """
    config_file = Path(config_path)

    if not config_file.is_absolute() and not config_file.exists():
        # Look for the project root, starting from the current directory and going up
        current = Path.cwd()
        found = False
        for _ in range(5):
            potential_config = current / config_path
            if potential_config.exists():
                config_file = potential_config
                found = True
                break
            parent = current.parent
            if parent == current:
                break
            current = parent

        if not found:
            # Last resort: relative to this file's location
            project_root = Path(__file__).parent.parent
            config_file = project_root / config_path

    if not config_file.exists():
        raise ConfigurationError(
            f"Config file not found: {config_path}",
            error_code="CONFIG_NOT_FOUND",
            details={"searched_from": str(Path.cwd()), "tried": str(config_file)},
        )

    return read_yaml_mapping(config_file)


def read_yaml_mapping(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a YAML file that must contain a mapping (an empty file is an empty mapping)."""
    path = Path(path)
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigurationError(
            f"Cannot read config file {path}: {e}", error_code="CONFIG_UNREADABLE"
        ) from e
    except yaml.YAMLError as e:
        raise ConfigurationError(
            f"Malformed config file {path}: {e}", error_code="CONFIG_MALFORMED"
        ) from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(
            f"Config file {path} must contain key: value pairs", error_code="CONFIG_MALFORMED"
        )
    return data


def resolve_thread_count(configured: Optional[int] = None) -> int:
    """
    Number of sweep workers: the configured count (``--threads``, run file or
    ``sweep.threads``) capped by SIR_EXACT_THREADS, also read from .env. Without a
    configured count the cap itself applies, then the CPU count.
    """
    load_dotenv()
    configured = max(1, int(configured)) if configured else None
    raw = os.environ.get("SIR_EXACT_THREADS")
    if not raw:
        return configured or os.cpu_count() or 1
    try:
        cap = max(1, int(raw))
    except ValueError as e:
        raise ConfigurationError(
            f"SIR_EXACT_THREADS must be an integer, got {raw!r}", error_code="CONFIG_MALFORMED"
        ) from e
    return min(cap, configured) if configured else cap


def format_float(value: float, precision: int = 17) -> str:
    """
    Shortest decimal that reads back as ``value``, capped at ``precision`` significant
    digits (17 always round-trips binary64). NaN renders as an empty field.
    """
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    value = float(value)
    if not math.isfinite(value):
        return f"{value:g}"
    mantissa, exponent = np.format_float_scientific(value, unique=True, trim="-").split("e")
    digits = len(mantissa.lstrip("-").replace(".", ""))
    # Keep integers below 10**precision in fixed notation (100, not 1e+02)
    if 0 <= int(exponent) < precision:
        digits = max(digits, int(exponent) + 1)
    return f"{value:.{min(digits, precision)}g}"
