"""
Comparator schemes: the prior discrete-time dynamic scheme, forward Euler and RK4.

None of these clamp. Their outputs are SignedState triples so that negative compartments
stay visible; that visibility is the point of comparing them with the NSFD scheme.
"""

from typing import Callable, Sequence, Tuple, Union

import numpy as np

from models.continuous import rhs
from models.discrete import check_steps
from models.types import AnyState, InitialState, Scheme, SignedState, SirParameters, Trajectory
from utils.exceptions import DegenerateStateError, SchemeError, ValidationError
from utils.logger import get_logger

logger = get_logger("models.comparators")

Triple = Tuple[float, float, float]


def flawed_update(x: float, y: float, z: float, b: float, c: float) -> Triple:
    """
    One step (h = 1) of the prior implicit-in-y scheme, solved explicitly:

        y(t+1) = y (x + y) / ((1 + c)(x + y) - b x)
        x(t+1) = x - b x y(t+1) / (x + y)
        z(t+1) = z + c y(t+1)
    """
    if y == 0.0:
        return x, y, z
    s = x + y
    if s == 0.0:
        raise DegenerateStateError(
            "x + y vanishes in the flawed scheme",
            error_code="DEGENERATE_STATE",
            details={"x": x, "y": y},
        )
    denominator = (1.0 + c) * s - b * x
    if denominator == 0.0:
        raise SchemeError(
            "flawed scheme: implicit-solve denominator (1+c)(x+y) - b x is zero",
            error_code="DIVISION_BY_ZERO",
            details={"x": x, "y": y, "b": b, "c": c},
        )
    y1 = y * s / denominator
    x1 = x - b * x * y1 / s
    z1 = z + c * y1
    return x1, y1, z1


def _check_rate(name: str, value: float) -> float:
    if not np.isfinite(value) or value <= 0:
        raise ValidationError(
            f"{name}: rate must be positive and finite, got {value}",
            error_code="VALIDATION_ERROR",
            details={"errors": [f"{name}: rate must be positive and finite"], "fields": [name]},
        )
    return float(value)


def flawed_step(state: AnyState, b_t: float, c_t: float) -> SignedState:
    """Advance one unit time step of the prior scheme with rates b(t), c(t)."""
    b_t, c_t = _check_rate("b", b_t), _check_rate("c", c_t)
    x, y, z = flawed_update(state.x, state.y, state.z, b_t, c_t)
    return SignedState(x=x, y=y, z=z)


def flawed_orbit(
    init: InitialState,
    params: SirParameters,
    n_steps: int,
    b_seq: Union[None, float, Sequence[float]] = None,
    c_seq: Union[None, float, Sequence[float]] = None,
) -> Trajectory:
    """
    Iterate the prior scheme. Rates are ``params.b``/``params.c`` unless per-step
    sequences are given (``b_seq[k]`` drives the step from k to k+1).

    Raises:
        SchemeError: If ``params.h`` is not 1, or a step divides by zero
    """
    if params.h != 1.0:
        raise SchemeError(
            f"flawed scheme is defined for h = 1 only, got h = {params.h}",
            error_code="FLAWED_STEP_SIZE",
            details={"h": params.h},
        )
    n_steps = check_steps(n_steps)
    b_rates = rate_sequence("b_seq", b_seq, params.b, n_steps)
    c_rates = rate_sequence("c_seq", c_seq, params.c, n_steps)

    xs, ys, zs = np.empty(n_steps + 1), np.empty(n_steps + 1), np.empty(n_steps + 1)
    x, y, z = init.x0, init.y0, init.z0
    xs[0], ys[0], zs[0] = x, y, z
    for k in range(n_steps):
        x, y, z = flawed_update(x, y, z, b_rates[k], c_rates[k])
        xs[k + 1], ys[k + 1], zs[k + 1] = x, y, z
    return Trajectory(Scheme.FLAWED_DYNAMIC, params, init, xs, ys, zs)


def rate_sequence(
    name: str, seq: Union[None, float, Sequence[float]], constant: float, n_steps: int
) -> np.ndarray:
    """Per-step rates: ``seq`` itself, a scalar broadcast to every step, or ``constant``."""
    if seq is None:
        return np.full(n_steps, _check_rate(name, constant))
    if np.ndim(seq) == 0:
        return np.full(n_steps, _check_rate(name, float(seq)))  # type: ignore[arg-type]
    values = np.asarray(seq, dtype=float)
    if values.ndim != 1 or len(values) < n_steps:
        raise ValidationError(
            f"{name}: needs at least {n_steps} rates, got {values.size}",
            error_code="VALIDATION_ERROR",
            details={"errors": [f"{name}: too short"], "fields": [name]},
        )
    if not np.all(np.isfinite(values[:n_steps])) or np.any(values[:n_steps] <= 0):
        raise ValidationError(
            f"{name}: rates must be positive and finite",
            error_code="VALIDATION_ERROR",
            details={"errors": [f"{name}: rates must be positive and finite"], "fields": [name]},
        )
    return values


def euler_update(x: float, y: float, z: float, b: float, c: float, h: float) -> Triple:
    if y == 0.0:
        return x, y, z
    dx, dy, dz = rhs(x, y, b, c)
    return x + h * dx, y + h * dy, z + h * dz


def rk4_update(x: float, y: float, z: float, b: float, c: float, h: float) -> Triple:
    """Classical four-stage Runge-Kutta step on the SIR vector field."""
    if y == 0.0:
        return x, y, z
    k1 = rhs(x, y, b, c)
    k2 = rhs(x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], b, c)
    k3 = rhs(x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], b, c)
    k4 = rhs(x + h * k3[0], y + h * k3[1], b, c)
    w = h / 6.0
    return (
        x + w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        z + w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    )


def euler_step(state: AnyState, params: SirParameters) -> SignedState:
    x, y, z = euler_update(state.x, state.y, state.z, params.b, params.c, params.h)
    return SignedState(x=x, y=y, z=z)


def rk4_step(state: AnyState, params: SirParameters) -> SignedState:
    x, y, z = rk4_update(state.x, state.y, state.z, params.b, params.c, params.h)
    return SignedState(x=x, y=y, z=z)


def _iterate(
    scheme: Scheme,
    update: Callable[..., Triple],
    init: InitialState,
    params: SirParameters,
    n_steps: int,
) -> Trajectory:
    n_steps = check_steps(n_steps)
    xs, ys, zs = np.empty(n_steps + 1), np.empty(n_steps + 1), np.empty(n_steps + 1)
    x, y, z = init.x0, init.y0, init.z0
    xs[0], ys[0], zs[0] = x, y, z
    for k in range(1, n_steps + 1):
        x, y, z = update(x, y, z, params.b, params.c, params.h)
        xs[k], ys[k], zs[k] = x, y, z
    logger.debug("comparator orbit", scheme=scheme.value, n_steps=n_steps, h=params.h)
    return Trajectory(scheme, params, init, xs, ys, zs)


def euler_orbit(init: InitialState, params: SirParameters, n_steps: int) -> Trajectory:
    return _iterate(Scheme.FORWARD_EULER, euler_update, init, params, n_steps)


def rk4_orbit(init: InitialState, params: SirParameters, n_steps: int) -> Trajectory:
    return _iterate(Scheme.RK4, rk4_update, init, params, n_steps)
