"""SIR model core: types, NSFD and exact discrete solutions, continuous solutions, comparators."""

from .comparators import euler_orbit, euler_step, flawed_orbit, flawed_step, rk4_orbit, rk4_step
from .continuous import (
    continuous_exact,
    continuous_exact_equal_rates,
    continuous_exact_nonautonomous,
    continuous_exact_orbit,
    continuous_rhs,
)
from .discrete import (
    discrete_coefficients,
    exact_discrete,
    exact_discrete_orbit,
    nsfd_orbit,
    nsfd_step,
    product_factors,
)
from .schemes import simulate
from .types import (
    DiscreteSolutionCoefficients,
    InitialState,
    RateFunctions,
    Scheme,
    SignedState,
    SirParameters,
    SirState,
    Trajectory,
)

__all__ = [
    "DiscreteSolutionCoefficients",
    "InitialState",
    "RateFunctions",
    "Scheme",
    "SignedState",
    "SirParameters",
    "SirState",
    "Trajectory",
    "continuous_exact",
    "continuous_exact_equal_rates",
    "continuous_exact_nonautonomous",
    "continuous_exact_orbit",
    "continuous_rhs",
    "discrete_coefficients",
    "euler_orbit",
    "euler_step",
    "exact_discrete",
    "exact_discrete_orbit",
    "flawed_orbit",
    "flawed_step",
    "nsfd_orbit",
    "nsfd_step",
    "product_factors",
    "rk4_orbit",
    "rk4_step",
    "simulate",
]
