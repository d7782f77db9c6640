"""
Nonstandard finite difference (NSFD) discretisation of the SIR model and its exact
closed-form solution.

The NSFD map uses the denominator function phi(h) = h, psi(h) = 1 and the nonlocal
incidence b * x_{n+1} * y_n / (x_n + y_n):

    x_{n+1} = x_n (x_n + y_n) / (x_n + y_n (1 + bh))
    y_{n+1} = y_n (1 + bh)(x_n + y_n) / ((1 + ch)(x_n + y_n (1 + bh)))
    z_{n+1} = z_n + ch * y_{n+1}

Its n-th iterate is a product over i = 1..n of factors in kappa_bar * xi^(i-1), which is
evaluated here in the rewritten, overflow-safe form

    a_i       = 1 / (1 + bh / (1 + kappa_bar xi^(i-1)))
    a_tilde_i = 1 / (xi + bh xi / (1 + kappa_bar xi^(i-1)))

with x_n = x0 * prod(a_i), y_n = y0 * prod(a_tilde_i) and z_n = N - x_n - y_n.
"""

from typing import Tuple

import numpy as np

from models.types import (
    DiscreteSolutionCoefficients,
    InitialState,
    Scheme,
    SirParameters,
    SirState,
    Trajectory,
)
from utils.exceptions import DegenerateStateError, ValidationError
from utils.logger import get_logger

logger = get_logger("models.discrete")

# Above this kappa_bar * xi^(i-1) the factors are taken at their limits (1 and 1/xi)
SATURATION = 1e300


def discrete_coefficients(
    init: InitialState, params: SirParameters
) -> DiscreteSolutionCoefficients:
    """kappa_bar, xi and N for the product formula."""
    return DiscreteSolutionCoefficients(kappa_bar=init.x0 / init.y0, xi=params.xi, N=init.N)


def nsfd_update(x: float, y: float, z: float, bh: float, ch: float) -> Tuple[float, float, float]:
    """One NSFD step on plain floats; every state with y = 0 is a fixed point."""
    if y == 0.0:
        return x, y, z
    s = x + y
    if s <= 0.0:
        raise DegenerateStateError(
            "x + y must be positive for the NSFD update",
            error_code="DEGENERATE_STATE",
            details={"x": x, "y": y},
        )
    # s / d = (x + y) / (x + y (1 + bh)), formed from y / s so tiny y never underflows
    shrink = 1.0 / (1.0 + bh * (y / s))
    x1 = x * shrink
    y1 = y * (shrink * ((1.0 + bh) / (1.0 + ch)))
    z1 = z + ch * y1
    return x1, y1, z1


def nsfd_step(state: SirState, params: SirParameters) -> SirState:
    """Advance a state by one NSFD step of size ``params.h``."""
    x1, y1, z1 = nsfd_update(state.x, state.y, state.z, params.bh, params.ch)
    return SirState(x=x1, y=y1, z=z1)


def check_steps(n_steps: int, name: str = "n_steps") -> int:
    if isinstance(n_steps, bool) or int(n_steps) != n_steps or n_steps < 0:
        raise ValidationError(
            f"{name}: must be a non-negative integer, got {n_steps!r}",
            error_code="VALIDATION_ERROR",
            details={"errors": [f"{name}: must be a non-negative integer"], "fields": [name]},
        )
    return int(n_steps)


def nsfd_orbit(init: InitialState, params: SirParameters, n_steps: int) -> Trajectory:
    """Iterate the NSFD map ``n_steps`` times from ``init``."""
    n_steps = check_steps(n_steps)
    xs = np.empty(n_steps + 1)
    ys = np.empty(n_steps + 1)
    zs = np.empty(n_steps + 1)
    x, y, z = init.x0, init.y0, init.z0
    bh, ch = params.bh, params.ch
    xs[0], ys[0], zs[0] = x, y, z
    for k in range(1, n_steps + 1):
        x, y, z = nsfd_update(x, y, z, bh, ch)
        xs[k], ys[k], zs[k] = x, y, z

    logger.debug("nsfd orbit", n_steps=n_steps, b=params.b, c=params.c, h=params.h)
    return Trajectory(Scheme.NSFD, params, init, xs, ys, zs)


def product_factors(
    init: InitialState, params: SirParameters, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Factor arrays (a_1..a_n, a_tilde_1..a_tilde_n) of the exact discrete solution.

    Args:
        init: Initial state (fixes kappa_bar = x0 / y0)
        params: Rates and step size (fix xi)
        n: Number of factors

    Returns:
        Tuple of numpy arrays of length n
    """
    n = check_steps(n, "n")
    coeffs = discrete_coefficients(init, params)
    bh, xi = params.bh, coeffs.xi
    exponents = np.arange(n, dtype=float)
    with np.errstate(over="ignore", under="ignore"):
        q = coeffs.kappa_bar * np.power(xi, exponents)
    g = bh / (1.0 + q)
    a = 1.0 / (1.0 + g)
    a_tilde = 1.0 / (xi + xi * g)

    saturated = q > SATURATION
    a[saturated] = 1.0
    a_tilde[saturated] = 1.0 / xi
    return a, a_tilde


def removed_from_total(N: float, x, y):
    """z = N - x - y; rounding can leave values a few ulps below zero when z is tiny."""
    z = N - x - y
    floor = -8.0 * np.finfo(float).eps * N
    return np.where((z < 0.0) & (z >= floor), 0.0, z)


def exact_discrete(init: InitialState, params: SirParameters, n: int) -> SirState:
    """
    The n-th NSFD iterate from the closed-form product, without iterating the map.

    Args:
        init: Initial state
        params: Rates and step size
        n: Step index (n >= 0)

    Returns:
        State at step n
    """
    n = check_steps(n, "n")
    if n == 0:
        return init.as_state()
    a, a_tilde = product_factors(init, params, n)
    x = init.x0 * float(np.prod(a))
    y = init.y0 * float(np.prod(a_tilde))
    z = float(removed_from_total(init.N, x, y))
    return SirState(x=x, y=y, z=z)


def exact_discrete_orbit(init: InitialState, params: SirParameters, n_steps: int) -> Trajectory:
    """All states 0..n_steps of the closed-form solution via cumulative products."""
    n_steps = check_steps(n_steps)
    a, a_tilde = product_factors(init, params, n_steps)
    xs = init.x0 * np.concatenate(([1.0], np.cumprod(a)))
    ys = init.y0 * np.concatenate(([1.0], np.cumprod(a_tilde)))
    zs = removed_from_total(init.N, xs, ys)
    # Sample 0 is the initial state itself, not N - x0 - y0
    zs[0] = init.z0
    logger.debug("exact discrete orbit", n_steps=n_steps, xi=params.xi)
    return Trajectory(Scheme.EXACT_DISCRETE, params, init, xs, ys, zs)
