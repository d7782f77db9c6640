"""Empirical order of accuracy of a scheme against an exact reference."""

import math
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from models.continuous import continuous_exact
from models.schemes import simulate
from models.types import InitialState, Scheme, SirParameters
from utils.exceptions import ParameterError, SchemeError, ValidationError
from utils.logger import get_logger

logger = get_logger("analysis.convergence")

# Relative slack allowed when checking that h divides t_eval - t0
_GRID_SLACK = 1e-9


class OrderEstimate(BaseModel):
    """Max-norm errors over (x, y) at t_eval and the mean log2 ratio of successive errors."""

    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    reference: Scheme
    t_eval: float
    h_values: Tuple[float, ...]
    errors: Tuple[float, ...]
    estimated_order: Optional[float]


def _invalid(field: str, message: str) -> ValidationError:
    return ValidationError(
        f"{field}: {message}",
        error_code="VALIDATION_ERROR",
        details={"errors": [f"{field}: {message}"], "fields": [field]},
    )


def _steps_for(h: float, span: float) -> int:
    n = int(round(span / h))
    if n < 1 or abs(n * h - span) > _GRID_SLACK * max(1.0, span):
        raise _invalid("h_values", f"h = {h} does not divide t_eval - t0 = {span}")
    return n


def estimate_order(
    scheme: Scheme,
    init: InitialState,
    params: SirParameters,
    t_eval: float,
    h_values: Sequence[float],
    reference: Scheme = Scheme.CONTINUOUS_EXACT,
) -> OrderEstimate:
    """
    Run ``scheme`` to ``t_eval`` with each step size and compare with ``reference``.

    The default reference is the constant-rate closed form at t_eval; any other scheme
    is run with the same h (e.g. ExactDiscrete against NSFD). z is left out of the norm
    because it is fixed by conservation.

    Raises:
        SchemeError: For the flawed scheme, whose step is tied to h = 1
        ParameterError: For the closed-form reference when b == c
    """
    scheme, reference = Scheme.parse(scheme), Scheme.parse(reference)
    if Scheme.FLAWED_DYNAMIC in (scheme, reference):
        raise SchemeError(
            "order estimation needs a variable step; the flawed scheme is tied to h = 1",
            error_code="SCHEME_NOT_ALLOWED",
            details={"scheme": scheme.value, "reference": reference.value},
        )
    if reference is Scheme.CONTINUOUS_EXACT and params.b == params.c:
        raise ParameterError(
            "closed-form reference needs b != c",
            error_code="EQUAL_RATES",
            details={"b": params.b, "c": params.c},
        )
    h_values = tuple(float(h) for h in h_values)
    if len(h_values) < 2:
        raise _invalid("h_values", "need at least two step sizes")
    if any(not (h > 0 and math.isfinite(h)) for h in h_values):
        raise _invalid("h_values", "step sizes must be positive and finite")
    if any(later > earlier for earlier, later in zip(h_values, h_values[1:])):
        raise _invalid("h_values", "step sizes must not increase")
    span = t_eval - params.t0
    if not span > 0:
        raise _invalid("t_eval", "must exceed t0")

    exact = None
    if reference is Scheme.CONTINUOUS_EXACT:
        exact = continuous_exact(init, params, t_eval)

    errors = []
    for h in h_values:
        n = _steps_for(h, span)
        stepped = params.with_step(h)
        final = simulate(scheme, init, stepped, n).final
        target = exact if exact is not None else simulate(reference, init, stepped, n).final
        errors.append(max(abs(final.x - target.x), abs(final.y - target.y)))

    order = None
    if all(e > 0 for e in errors):
        ratios = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        order = float(np.mean(ratios))

    logger.debug("order estimate", scheme=scheme.value, errors=errors, order=order)
    return OrderEstimate(
        scheme=scheme,
        reference=reference,
        t_eval=t_eval,
        h_values=h_values,
        errors=tuple(errors),
        estimated_order=order,
    )
