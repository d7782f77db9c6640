"""
Long-term behaviour of the NSFD scheme.

R0 = b / c decides the limit: for R0 >= 1 every orbit tends to (0, 0, N); for R0 < 1 it
tends to (alpha, 0, N - alpha) with alpha = x0 * prod(a_i), 0 < alpha <= N.
"""

import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from models.discrete import check_steps, discrete_coefficients, product_factors
from models.types import InitialState, SirParameters, SirState
from utils.exceptions import ConvergenceError, ValidationError
from utils.logger import get_logger

logger = get_logger("analysis.equilibrium")

DEFAULT_ALPHA_TOL = 1e-14
DEFAULT_MAX_ITER = 10**7
_CHUNK = 1 << 16


class Regime(str, Enum):
    EXTINCTION_STABLE = "ExtinctionStable"
    ENDEMIC_FREE_STABLE = "EndemicFreeStable"


class EquilibriumReport(BaseModel):
    """R0, the predicted limit point and, when R0 < 1, the limit alpha of x_n."""

    model_config = ConfigDict(frozen=True)

    r0: float
    regime: Regime
    limit_point: SirState
    alpha: Optional[float] = None
    iterations_used: int = 0


class ConvergenceDiagnostics(BaseModel):
    """First m terms of a_i and a_tilde_i, xi and (for R0 > 1) the threshold index p."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a_seq: np.ndarray
    a_tilde_seq: np.ndarray
    xi: float
    p_threshold: Optional[int] = None
    p_bound: Optional[float] = None
    p_verified: Optional[bool] = None


def reproduction_number(params: SirParameters) -> float:
    """R0 = b / c."""
    return params.b / params.c


def classify_equilibrium(
    init: InitialState,
    params: SirParameters,
    tol: float = DEFAULT_ALPHA_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumReport:
    """
    Classify the limit of the NSFD orbit from ``init``.

    For R0 < 1 the product of a_i is accumulated (as a sum of log1p terms) until the
    deficit 1 - a_i drops below ``tol``; a_i increases to 1 geometrically in xi, so the
    number of terms is O(log(1/tol) / log(xi)).

    Args:
        init: Initial state
        params: Rates and step size
        tol: Deficit threshold ending the product (> 0)
        max_iter: Budget of factors

    Returns:
        EquilibriumReport

    Raises:
        ConvergenceError: If ``max_iter`` factors are used before the deficit falls below tol
    """
    if not (tol > 0 and math.isfinite(tol)):
        raise ValidationError(
            f"tol: must be positive, got {tol}",
            error_code="VALIDATION_ERROR",
            details={"errors": ["tol: must be positive"], "fields": ["tol"]},
        )
    max_iter = check_steps(max_iter, "max_iter")
    r0 = reproduction_number(params)
    N = init.N

    # The boundary b == c belongs to the extinction regime
    if params.b >= params.c:
        return EquilibriumReport(
            r0=r0,
            regime=Regime.EXTINCTION_STABLE,
            limit_point=SirState(x=0.0, y=0.0, z=N),
        )

    coeffs = discrete_coefficients(init, params)
    bh, xi = params.bh, coeffs.xi
    log_product = 0.0
    start = 0
    iterations = None
    while start < max_iter:
        count = min(_CHUNK, max_iter - start)
        with np.errstate(over="ignore"):
            q = coeffs.kappa_bar * np.power(xi, np.arange(start, start + count, dtype=float))
        g = bh / (1.0 + q)
        # 1 - a_i = g / (1 + g), without the cancellation of 1 - a_i
        settled = np.flatnonzero(g / (1.0 + g) < tol)
        if settled.size:
            last = int(settled[0])
            log_product += float(np.sum(np.log1p(g[: last + 1])))
            iterations = start + last + 1
            break
        log_product += float(np.sum(np.log1p(g)))
        start += count

    if iterations is None:
        raise ConvergenceError(
            "alpha did not settle within the iteration budget",
            error_code="ALPHA_NONCONVERGENCE",
            details={"max_iter": max_iter, "tol": tol, "xi": xi},
        )

    alpha = init.x0 * math.exp(-log_product)
    logger.debug("alpha computed", alpha=alpha, iterations=iterations, xi=xi)
    return EquilibriumReport(
        r0=r0,
        regime=Regime.ENDEMIC_FREE_STABLE,
        limit_point=SirState(x=alpha, y=0.0, z=max(N - alpha, 0.0)),
        alpha=alpha,
        iterations_used=iterations,
    )


def convergence_diagnostics(
    init: InitialState, params: SirParameters, m: int
) -> ConvergenceDiagnostics:
    """
    The sequences a_i, a_tilde_i (i = 1..m) and, for R0 > 1, the smallest integer p
    strictly above 1 + ln(ch / ((1 - xi) kappa_bar)) / ln(xi), the index from which
    a_tilde_i < 1.
    """
    m = check_steps(m, "m")
    if m < 1:
        raise ValidationError(
            "m: must be at least 1",
            error_code="VALIDATION_ERROR",
            details={"errors": ["m: must be at least 1"], "fields": ["m"]},
        )
    a, a_tilde = product_factors(init, params, m)
    coeffs = discrete_coefficients(init, params)
    xi = coeffs.xi

    if params.b <= params.c:
        return ConvergenceDiagnostics(a_seq=a, a_tilde_seq=a_tilde, xi=xi)

    # 1 - xi written as (b - c) h / (1 + bh) to avoid cancellation
    one_minus_xi = (params.b - params.c) * params.h / (1.0 + params.bh)
    p_bound = 1.0 + math.log(params.ch / (one_minus_xi * coeffs.kappa_bar)) / math.log(xi)
    p = max(1, math.floor(p_bound) + 1)
    q = coeffs.kappa_bar * xi ** (p - 1)
    a_tilde_p = 1.0 / (xi + xi * params.bh / (1.0 + q))
    return ConvergenceDiagnostics(
        a_seq=a,
        a_tilde_seq=a_tilde,
        xi=xi,
        p_threshold=p,
        p_bound=p_bound,
        p_verified=bool(a_tilde_p < 1.0),
    )
