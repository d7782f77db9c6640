"""Scheme dispatch: one entry point that builds a trajectory for any Scheme."""

from models.comparators import euler_orbit, flawed_orbit, rk4_orbit
from models.continuous import continuous_exact_orbit
from models.discrete import exact_discrete_orbit, nsfd_orbit
from models.types import InitialState, Scheme, SirParameters, Trajectory

_ORBITS = {
    Scheme.NSFD: nsfd_orbit,
    Scheme.EXACT_DISCRETE: exact_discrete_orbit,
    Scheme.FLAWED_DYNAMIC: flawed_orbit,
    Scheme.FORWARD_EULER: euler_orbit,
    Scheme.RK4: rk4_orbit,
    Scheme.CONTINUOUS_EXACT: continuous_exact_orbit,
}


def simulate(scheme: Scheme, init: InitialState, params: SirParameters, n_steps: int) -> Trajectory:
    """
    Run ``scheme`` for ``n_steps`` steps of size ``params.h`` from ``init``.

    Continuous-exact trajectories are the exact solution sampled on the same grid.
    """
    return _ORBITS[Scheme.parse(scheme)](init, params, n_steps)
