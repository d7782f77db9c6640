"""
Run configuration for the command-line front end.

Values come from an optional run file (``--config``) and are overridden by flags.
Both use the flag names (``b``, ``x0``, ``steps``, ``t_end`` ...).
"""

from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Set

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from analysis.sweep import METRICS
from models.types import InitialState, Scheme, SirParameters
from utils.exceptions import ConfigurationError, ValidationError
from utils.helpers import read_yaml_mapping

MIN_PRECISION = 6
MAX_PRECISION = 17

RUN_KEYS = {"scheme", "b", "c", "h", "t0", "x0", "y0", "z0", "steps", "t_end", "out", "precision"}
SWEEP_KEYS = {
    "b", "c", "h", "x0", "y0", "z0", "metric", "flawed_steps", "threads", "out", "precision"
}
KNOWN_KEYS = RUN_KEYS | SWEEP_KEYS


class RunConfig(BaseModel):
    """Scheme, parameters, initial state, horizon and output settings of one run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scheme: Scheme = Scheme.NSFD
    schemes: Optional[List[Scheme]] = None
    b: float = Field(..., gt=0, allow_inf_nan=False)
    c: float = Field(..., gt=0, allow_inf_nan=False)
    h: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    t0: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    x0: float = Field(..., gt=0, allow_inf_nan=False)
    y0: float = Field(..., gt=0, allow_inf_nan=False)
    z0: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    steps: Optional[int] = Field(default=None, ge=0)
    t_end: Optional[float] = Field(default=None, allow_inf_nan=False)
    out: Optional[Path] = None
    precision: int = Field(default=MAX_PRECISION, ge=MIN_PRECISION, le=MAX_PRECISION)

    @field_validator("scheme", mode="before")
    @classmethod
    def parse_scheme(cls, v):
        return Scheme.parse(v).value if isinstance(v, str) else v

    @field_validator("schemes", mode="before")
    @classmethod
    def parse_schemes(cls, v):
        if isinstance(v, str):
            v = [part for part in v.split(",") if part.strip()]
        if v is None:
            return v
        return [Scheme.parse(s).value if isinstance(s, str) else s for s in v]

    @model_validator(mode="after")
    def check_horizon(self) -> "RunConfig":
        if self.steps is not None and self.t_end is not None:
            raise ValueError("steps and t_end are mutually exclusive")
        if self.t_end is not None and self.t_end < self.t0:
            raise ValueError("t_end must not precede t0")
        return self

    @property
    def params(self) -> SirParameters:
        return SirParameters(b=self.b, c=self.c, h=self.h, t0=self.t0)

    @property
    def init(self) -> InitialState:
        return InitialState(x0=self.x0, y0=self.y0, z0=self.z0)

    @property
    def n_steps(self) -> int:
        """steps, or round((t_end - t0) / h) when the horizon is given as a time."""
        if self.steps is not None:
            return self.steps
        if self.t_end is not None:
            return int(round((self.t_end - self.t0) / self.h))
        raise ValidationError(
            "steps: one of steps / t_end is required",
            error_code="VALIDATION_ERROR",
            details={"errors": ["steps: one of steps / t_end is required"], "fields": ["steps"]},
        )


class SweepConfig(BaseModel):
    """Grid axes, shared initial state and per-cell metric selection of a sweep."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    b: str
    c: str
    h: str = "1"
    x0: float = Field(..., gt=0, allow_inf_nan=False)
    y0: float = Field(..., gt=0, allow_inf_nan=False)
    z0: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    metric: str = "all"
    flawed_steps: int = Field(default=100, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    out: Optional[Path] = None
    precision: int = Field(default=MAX_PRECISION, ge=MIN_PRECISION, le=MAX_PRECISION)

    @field_validator("b", "c", "h", mode="before")
    @classmethod
    def axis_as_text(cls, v):
        if isinstance(v, (list, tuple)):
            return ",".join(str(item) for item in v)
        return str(v)

    @field_validator("metric")
    @classmethod
    def check_metric(cls, v: str) -> str:
        if v not in METRICS:
            raise ValueError(f"must be one of {', '.join(METRICS)}")
        return v

    @property
    def init(self) -> InitialState:
        return InitialState(x0=self.x0, y0=self.y0, z0=self.z0)


def normalise_keys(values: Mapping[str, Any]) -> Dict[str, Any]:
    """``t-end`` and ``t_end`` name the same setting."""
    return {str(k).strip().replace("-", "_"): v for k, v in values.items()}


def read_run_file(path: str) -> Dict[str, Any]:
    """
    A run file is either flat YAML (`b: 0.3`) or INI-style `key = value` lines.
    Values of the `key = value` form are typed by YAML scalar rules; `#` starts a comment.
    """
    text = Path(path).read_text() if Path(path).is_file() else None
    if text is None:
        return read_yaml_mapping(path)
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("[")]
    if not lines or not all("=" in line and ":" not in line.split("=", 1)[0] for line in lines):
        return read_yaml_mapping(path)

    values: Dict[str, Any] = {}
    for line in lines:
        key, raw = (part.strip() for part in line.split("=", 1))
        try:
            values[key] = yaml.safe_load(raw) if raw else None
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Malformed value for {key} in {path}: {raw!r}", error_code="CONFIG_MALFORMED"
            ) from e
    return values


def merge_settings(
    config_file: Optional[str], flags: Mapping[str, Any], allowed: Set[str]
) -> Dict[str, Any]:
    """
    File values overridden by flags that were given (not None).

    Args:
        config_file: Optional run file (`key = value` lines or flat YAML)
        flags: Parsed command-line flags
        allowed: Keys the current subcommand uses; other known keys in the file are ignored

    Raises:
        ConfigurationError: If the file names a key no subcommand knows
    """
    merged: Dict[str, Any] = {}
    if config_file:
        file_values = normalise_keys(read_run_file(config_file))
        unknown = sorted(set(file_values) - KNOWN_KEYS)
        if unknown:
            raise ConfigurationError(
                f"Unknown key(s) in {config_file}: {', '.join(unknown)}",
                error_code="CONFIG_UNKNOWN_KEY",
                details={"keys": unknown},
            )
        merged.update({k: v for k, v in file_values.items() if k in allowed})
    merged.update({k: v for k, v in normalise_keys(flags).items() if v is not None})
    return merged
