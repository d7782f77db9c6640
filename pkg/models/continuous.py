"""
Continuous-time SIR model: right-hand side and exact solutions.

    x' = -b x y / (x + y)
    y' =  b x y / (x + y) - c y
    z' =  c y

Constant rates use the closed form in kappa = y0 / x0 (and its b = c limit); time-varying
rates use the quadrature representation with G(s) = integral of (c - b) from t0 to s.
Closed forms are evaluated in log space so long horizons cannot overflow.
"""

import math
from typing import Tuple

import numpy as np

from models.discrete import check_steps, removed_from_total
from models.quadrature import DEFAULT_MAX_SUBDIVISIONS, CumulativeIntegral, adaptive_simpson
from models.types import (
    AnyState,
    InitialState,
    RateFunctions,
    Scheme,
    SirParameters,
    SirState,
    Trajectory,
)
from utils.exceptions import DegenerateStateError, ParameterError, ValidationError
from utils.logger import get_logger

logger = get_logger("models.continuous")


def rhs(x: float, y: float, b: float, c: float) -> Tuple[float, float, float]:
    """Rates (dx/dt, dy/dt, dz/dt) on plain floats."""
    s = x + y
    if s == 0.0:
        raise DegenerateStateError(
            "x + y vanishes; the incidence term is undefined",
            error_code="DEGENERATE_STATE",
            details={"x": x, "y": y},
        )
    incidence = b * x * y / s
    removal = c * y
    return -incidence, incidence - removal, removal


def continuous_rhs(state: AnyState, params: SirParameters) -> Tuple[float, float, float]:
    """Evaluate the SIR vector field at ``state``."""
    return rhs(state.x, state.y, params.b, params.c)


def _check_time(t: float, t0: float) -> float:
    if not np.isfinite(t) or t < t0:
        raise ValidationError(
            f"t: must be finite and >= t0 ({t0}), got {t}",
            error_code="VALIDATION_ERROR",
            details={"errors": ["t: must be finite and >= t0"], "fields": ["t"]},
        )
    return float(t)


def _closed_form(init: InitialState, b: float, c: float, tau: np.ndarray):
    """x and y of the constant-rate solution for b != c at elapsed times tau."""
    kappa = init.y0 / init.x0
    r = b - c
    p = b / r
    # log((1 + kappa) / (1 + kappa e^{r tau})), with log(1 + e^u) taken as logaddexp(0, u)
    log_ratio = math.log1p(kappa) - np.logaddexp(0.0, math.log(kappa) + r * tau)
    x = init.x0 * np.exp(p * log_ratio)
    y = init.y0 * np.exp(p * log_ratio + r * tau)
    x = np.where(tau == 0.0, init.x0, x)
    y = np.where(tau == 0.0, init.y0, y)
    return x, y


def _equal_rates_form(init: InitialState, b: float, tau: np.ndarray):
    """x and y for b = c: the ratio x / y is frozen and both decay at b kappa / (1 + kappa)."""
    kappa = init.y0 / init.x0
    decay = np.exp(-b * kappa * tau / (1.0 + kappa))
    x = np.where(tau == 0.0, init.x0, init.x0 * decay)
    y = np.where(tau == 0.0, init.y0, init.y0 * decay)
    return x, y


def _state(init: InitialState, x, y) -> SirState:
    x, y = float(x), float(y)
    z = float(removed_from_total(init.N, x, y))
    return SirState(x=x, y=y, z=z)


def continuous_exact(init: InitialState, params: SirParameters, t: float) -> SirState:
    """
    Exact solution at time ``t`` for constant rates with b != c.

    Raises:
        ParameterError: When b == c; use ``continuous_exact_equal_rates``.
    """
    if params.b == params.c:
        raise ParameterError(
            "closed form needs b != c; use continuous_exact_equal_rates",
            error_code="EQUAL_RATES",
            details={"b": params.b, "c": params.c},
        )
    t = _check_time(t, params.t0)
    if t == params.t0:
        return init.as_state()
    x, y = _closed_form(init, params.b, params.c, np.array(t - params.t0))
    return _state(init, x, y)


def continuous_exact_equal_rates(init: InitialState, params: SirParameters, t: float) -> SirState:
    """
    Exact solution at time ``t`` when b == c.

    Raises:
        ParameterError: When b != c; use ``continuous_exact``.
    """
    if params.b != params.c:
        raise ParameterError(
            "equal-rates solution needs b == c; use continuous_exact",
            error_code="UNEQUAL_RATES",
            details={"b": params.b, "c": params.c},
        )
    t = _check_time(t, params.t0)
    if t == params.t0:
        return init.as_state()
    x, y = _equal_rates_form(init, params.b, np.array(t - params.t0))
    return _state(init, x, y)


def continuous_exact_orbit(init: InitialState, params: SirParameters, n_steps: int) -> Trajectory:
    """The exact solution sampled on t0 + n h, n = 0..n_steps (either closed form)."""
    n_steps = check_steps(n_steps)
    tau = np.arange(n_steps + 1, dtype=float) * params.h
    if params.b == params.c:
        xs, ys = _equal_rates_form(init, params.b, tau)
    else:
        xs, ys = _closed_form(init, params.b, params.c, tau)
    zs = removed_from_total(init.N, xs, ys)
    zs[0] = init.z0
    return Trajectory(Scheme.CONTINUOUS_EXACT, params, init, xs, ys, zs)


def continuous_exact_nonautonomous(
    init: InitialState,
    rates: RateFunctions,
    t0: float,
    t: float,
    quad_tol: float = 1e-10,
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS,
) -> SirState:
    """
    Exact solution for time-dependent rates b(s), c(s).

    x(t) = x0 exp(-kappa * I(t)) with I(t) = integral of b(s) / (kappa + e^{G(s)}) and
    G(s) = integral of (c - b); y follows from y / x = kappa e^{-G(t)}.

    Args:
        init: Initial state at t0
        rates: Positive rate functions
        t0: Initial time
        t: Evaluation time (t >= t0)
        quad_tol: Absolute tolerance for both quadratures
        max_subdivisions: Subdivision budget per quadrature

    Raises:
        QuadratureError: If a quadrature exhausts its budget
    """
    t = _check_time(t, t0)
    if t == t0:
        return init.as_state()
    kappa = init.y0 / init.x0

    G = CumulativeIntegral(lambda s: rates.c(s) - rates.b(s), t0, t, quad_tol, max_subdivisions)

    def integrand(s: float) -> float:
        g = G(s)
        if g > 0.0:
            e = math.exp(-g)
            return rates.b(s) * e / (kappa * e + 1.0)
        return rates.b(s) / (kappa + math.exp(g))

    outer = adaptive_simpson(integrand, t0, t, quad_tol, max_subdivisions)
    log_decay = -kappa * outer.value
    x = init.x0 * math.exp(log_decay)
    y = init.y0 * math.exp(log_decay - G(t))

    logger.debug(
        "nonautonomous solution",
        inner_panels=len(G),
        outer_subdivisions=outer.subdivisions,
        error_estimate=outer.error,
    )
    return _state(init, x, y)
