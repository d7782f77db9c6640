"""
State, parameter and trajectory types shared by every scheme.

Parameter and initial-condition types validate eagerly (pydantic); the signed triple
returned by the comparator schemes is kept apart from SirState so that a negative
compartment can never masquerade as a valid state.
"""

from enum import Enum
from typing import Callable, Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from utils.exceptions import ValidationError

COMPONENTS = ("x", "y", "z")


class Scheme(str, Enum):
    """Scheme selector used by trajectories, the CLI and the analysis helpers."""

    NSFD = "nsfd"
    EXACT_DISCRETE = "exact_discrete"
    FLAWED_DYNAMIC = "flawed_dynamic"
    FORWARD_EULER = "forward_euler"
    RK4 = "rk4"
    CONTINUOUS_EXACT = "continuous_exact"

    @property
    def is_signed(self) -> bool:
        """Comparator schemes never clamp, so their states may be negative."""
        return self in (Scheme.FLAWED_DYNAMIC, Scheme.FORWARD_EULER, Scheme.RK4)

    @classmethod
    def parse(cls, value: Union[str, "Scheme"]) -> "Scheme":
        if isinstance(value, Scheme):
            return value
        key = str(value).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValidationError(
                f"scheme: unknown scheme {value!r} (choose from {choices})",
                error_code="VALIDATION_ERROR",
                details={"errors": [f"scheme: unknown scheme {value!r}"], "fields": ["scheme"]},
            ) from None


class SirParameters(BaseModel):
    """Constant rates b, c, the step size h and the initial time t0."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    b: float = Field(..., gt=0, allow_inf_nan=False, description="Transmission rate")
    c: float = Field(..., gt=0, allow_inf_nan=False, description="Recovery rate")
    h: float = Field(default=1.0, gt=0, allow_inf_nan=False, description="Time step")
    t0: float = Field(default=0.0, ge=0, allow_inf_nan=False, description="Initial time")

    @property
    def bh(self) -> float:
        return self.b * self.h

    @property
    def ch(self) -> float:
        return self.c * self.h

    @property
    def xi(self) -> float:
        """(1 + ch) / (1 + bh); below 1 exactly when b > c."""
        return (1.0 + self.ch) / (1.0 + self.bh)

    def with_step(self, h: float) -> "SirParameters":
        return SirParameters(b=self.b, c=self.c, h=h, t0=self.t0)


class InitialState(BaseModel):
    """Initial compartments; susceptible and infected must be strictly positive."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x0: float = Field(..., gt=0, allow_inf_nan=False, description="Initial susceptible")
    y0: float = Field(..., gt=0, allow_inf_nan=False, description="Initial infected")
    z0: float = Field(default=0.0, ge=0, allow_inf_nan=False, description="Initial removed")

    @property
    def N(self) -> float:
        return self.x0 + self.y0 + self.z0

    def as_state(self) -> "SirState":
        return SirState(x=self.x0, y=self.y0, z=self.z0)


class SirState(BaseModel):
    """A non-negative compartment triple."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x: float = Field(..., ge=0, allow_inf_nan=False, description="Susceptible")
    y: float = Field(..., ge=0, allow_inf_nan=False, description="Infected")
    z: float = Field(..., ge=0, allow_inf_nan=False, description="Removed")

    def total(self) -> float:
        return self.x + self.y + self.z

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)


class SignedState(BaseModel):
    """Unclamped output of the flawed, Euler and RK4 comparators."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    x: float
    y: float
    z: float

    def total(self) -> float:
        return self.x + self.y + self.z

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def is_nonnegative(self) -> bool:
        return self.first_negative() is None

    def first_negative(self) -> Optional[Tuple[str, float]]:
        """First component (in x, y, z order) that is negative, with its value."""
        for name, value in zip(COMPONENTS, self.as_tuple()):
            if value < 0:
                return name, value
        return None


AnyState = Union[SirState, SignedState]


class DiscreteSolutionCoefficients(BaseModel):
    """kappa_bar = x0 / y0 and xi = (1 + ch) / (1 + bh) of the product formula."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kappa_bar: float = Field(..., gt=0)
    xi: float = Field(..., gt=0)
    N: float = Field(..., gt=0)


class RateFunctions(BaseModel):
    """Time-dependent transmission and recovery rates."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    b_of_t: Callable[[float], float]
    c_of_t: Callable[[float], float]

    @classmethod
    def constant(cls, b: float, c: float) -> "RateFunctions":
        return cls(b_of_t=lambda _t: b, c_of_t=lambda _t: c)

    def b(self, t: float) -> float:
        return _checked_rate("b", self.b_of_t(t), t)

    def c(self, t: float) -> float:
        return _checked_rate("c", self.c_of_t(t), t)


def _checked_rate(name: str, value: float, t: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValidationError(
            f"{name}: rate must be positive and finite, got {value} at t={t}",
            error_code="VALIDATION_ERROR",
            details={"errors": [f"{name}: rate must be positive and finite"], "t": t},
        )
    return value


class Trajectory:
    """
    Samples of one scheme on the uniform grid t_n = t0 + n*h.

    Components are held as numpy arrays; ``state(i)`` rebuilds a typed state.
    """

    def __init__(
        self,
        scheme: Scheme,
        params: SirParameters,
        init: InitialState,
        x: np.ndarray,
        y: np.ndarray,
        z: np.ndarray,
    ):
        self.scheme = Scheme.parse(scheme)
        self.params = params
        self.init = init
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.z = np.asarray(z, dtype=float)
        if not (len(self.x) == len(self.y) == len(self.z)) or len(self.x) == 0:
            raise ValueError("trajectory components must be non-empty and of equal length")
        self.n = np.arange(len(self.x), dtype=np.int64)
        # Times come from the index, never from accumulated sums of h
        self.t = params.t0 + self.n * params.h

    def __len__(self) -> int:
        return len(self.x)

    @property
    def n_steps(self) -> int:
        return len(self) - 1

    def state(self, i: int) -> AnyState:
        x, y, z = float(self.x[i]), float(self.y[i]), float(self.z[i])
        if self.scheme.is_signed:
            return SignedState(x=x, y=y, z=z)
        return SirState(x=x, y=y, z=z)

    @property
    def final(self) -> AnyState:
        return self.state(-1)

    def totals(self) -> np.ndarray:
        return self.x + self.y + self.z

    def to_frame(self, prefix: Optional[str] = None) -> pd.DataFrame:
        """Columns ``n, t, x, y, z`` (component columns prefixed with ``<prefix>_``)."""
        names = [f"{prefix}_{c}" if prefix else c for c in COMPONENTS]
        return pd.DataFrame(
            {"n": self.n, "t": self.t, names[0]: self.x, names[1]: self.y, names[2]: self.z}
        )
