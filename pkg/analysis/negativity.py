"""Negativity detector for the prior discrete-time dynamic scheme."""

from typing import NamedTuple, Optional, Sequence, Union

from models.comparators import flawed_update, rate_sequence
from models.discrete import check_steps
from models.types import InitialState, SignedState
from utils.logger import get_logger

logger = get_logger("analysis.negativity")

Rates = Union[float, Sequence[float]]


class NegativityViolation(NamedTuple):
    """First step at which a compartment of the flawed orbit went negative."""

    step: int
    component: str
    value: float


def detect_negativity(
    init: InitialState, b_seq: Rates, c_seq: Rates, n_steps: int
) -> Optional[NegativityViolation]:
    """
    Run the flawed scheme for up to ``n_steps`` steps and report the first negative
    component (checked in x, y, z order), or None.

    Args:
        init: Strictly positive initial state
        b_seq: Transmission rate per step (or one constant rate)
        c_seq: Recovery rate per step (or one constant rate)
        n_steps: Number of steps

    Raises:
        SchemeError: When an implicit-solve denominator vanishes
    """
    n_steps = check_steps(n_steps)
    b_rates = rate_sequence("b_seq", b_seq, 1.0, n_steps)
    c_rates = rate_sequence("c_seq", c_seq, 1.0, n_steps)

    x, y, z = init.x0, init.y0, init.z0
    for k in range(n_steps):
        x, y, z = flawed_update(x, y, z, b_rates[k], c_rates[k])
        negative = SignedState(x=x, y=y, z=z).first_negative()
        if negative is not None:
            name, value = negative
            logger.debug("negativity detected", step=k + 1, component=name, value=value)
            return NegativityViolation(k + 1, name, value)
    return None
