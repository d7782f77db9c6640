#!/usr/bin/env python3
"""Threshold quantities, equilibria, convergence diagnostics, order estimates and negativity."""

import math

import numpy as np
import pytest

from analysis.convergence import estimate_order
from analysis.equilibrium import (
    Regime,
    classify_equilibrium,
    convergence_diagnostics,
    reproduction_number,
)
from analysis.negativity import detect_negativity
from models.comparators import flawed_step
from models.discrete import exact_discrete_orbit, nsfd_orbit
from models.types import InitialState, Scheme, SirParameters
from utils.exceptions import ConvergenceError, ParameterError, SchemeError, ValidationError

REFINEMENT = (0.1, 0.05, 0.025, 0.0125)


@pytest.mark.parametrize("b, c, r0", [(0.3, 0.1, 3.0), (0.4, 0.4, 1.0), (0.3, 0.6, 0.5)])
def test_reproduction_number(b, c, r0):
    assert reproduction_number(SirParameters(b=b, c=c)) == pytest.approx(r0)


def test_outbreak_goes_extinct(init, outbreak_params):
    report = classify_equilibrium(init, outbreak_params)
    assert report.regime is Regime.EXTINCTION_STABLE
    assert report.limit_point.as_tuple() == (0.0, 0.0, 1.0)
    assert report.alpha is None


def test_equal_rates_boundary_goes_extinct():
    init = InitialState(x0=2.0, y0=1.0, z0=0.5)
    report = classify_equilibrium(init, SirParameters(b=0.25, c=0.25, h=0.1))
    assert report.r0 == 1.0
    assert report.regime is Regime.EXTINCTION_STABLE
    assert report.limit_point.as_tuple() == (0.0, 0.0, 3.5)
    assert report.alpha is None


def test_fading_outbreak_alpha(init, fading_params):
    report = classify_equilibrium(init, fading_params)
    assert report.regime is Regime.ENDEMIC_FREE_STABLE
    assert report.alpha == pytest.approx(0.636, abs=1e-3)
    assert report.limit_point.x == report.alpha
    assert report.limit_point.z == pytest.approx(1.0 - report.alpha)
    assert 0 < report.iterations_used <= 10**7


def test_alpha_tends_to_the_continuous_limit(init):
    report = classify_equilibrium(init, SirParameters(b=0.3, c=0.6, h=1e-4))
    assert report.alpha == pytest.approx(0.64, abs=2e-3)


def test_alpha_budget_exhaustion(init, fading_params):
    with pytest.raises(ConvergenceError):
        classify_equilibrium(init, fading_params, max_iter=10)


def test_alpha_rejects_non_positive_tolerance(init, fading_params):
    with pytest.raises(ValidationError):
        classify_equilibrium(init, fading_params, tol=0.0)


def test_alpha_matches_the_orbit_tail():
    rng = np.random.default_rng(20240611)
    for _ in range(100):
        b = rng.uniform(0.1, 1.0)
        params = SirParameters(b=b, c=b * rng.uniform(1.5, 5.0), h=rng.uniform(0.05, 1.0))
        init = InitialState(x0=rng.uniform(0.1, 1.0), y0=rng.uniform(0.1, 1.0))
        horizon = exact_discrete_orbit(init, params, 20000)
        n_star = int(np.flatnonzero(horizon.y < 1e-10 * init.N)[0])
        tail = nsfd_orbit(init, params, n_star).final
        alpha = classify_equilibrium(init, params).alpha
        assert abs(alpha - tail.x) <= 1e-6


def test_threshold_index_for_the_outbreak(init, outbreak_params):
    diagnostics = convergence_diagnostics(init, outbreak_params, 300)
    assert diagnostics.xi == pytest.approx(0.990148, abs=1e-6)
    assert diagnostics.p_threshold == 210
    assert diagnostics.p_verified is True
    a_tilde = diagnostics.a_tilde_seq
    assert a_tilde[209] < 1.0 <= a_tilde[208]


def test_no_threshold_when_the_outbreak_fades(init, fading_params):
    diagnostics = convergence_diagnostics(init, fading_params, 500)
    assert diagnostics.p_threshold is None
    assert np.all(diagnostics.a_tilde_seq < 1.0)


def test_first_factor(init):
    params = SirParameters(b=0.9, c=0.4, h=0.2)
    diagnostics = convergence_diagnostics(init, params, 1)
    kappa_bar = init.x0 / init.y0
    assert diagnostics.a_seq[0] == pytest.approx((1 + kappa_bar) / (1 + params.bh + kappa_bar))


def test_diagnostics_need_at_least_one_term(init, outbreak_params):
    with pytest.raises(ValidationError):
        convergence_diagnostics(init, outbreak_params, 0)


def _strict_where_resolved(values, q, bh):
    """Consecutive differences, kept only where q moves and the factor deficit is resolvable."""
    q = np.asarray(q)
    g = bh / (1.0 + q)
    with np.errstate(invalid="ignore"):
        resolved = (np.abs(np.diff(q)) > 1e-6 * (1.0 + q[:-1])) & (g[:-1] > 1e-6) & (g[1:] > 1e-6)
    return np.diff(values)[resolved]


def test_factor_sequences_are_monotone():
    rng = np.random.default_rng(7)
    m = 500
    for _ in range(1000):
        b, c = rng.uniform(0.01, 10.0, size=2)
        if b == c:
            continue
        params = SirParameters(b=b, c=c, h=rng.uniform(0.01, 1.0))
        init = InitialState(x0=rng.uniform(0.01, 100.0), y0=rng.uniform(0.01, 100.0))
        diagnostics = convergence_diagnostics(init, params, m)
        a, a_tilde = diagnostics.a_seq, diagnostics.a_tilde_seq
        with np.errstate(over="ignore"):
            q = (init.x0 / init.y0) * np.power(params.xi, np.arange(m, dtype=float))

        if b > c:
            assert np.all(a < 1.0)
            assert np.all(np.diff(a) <= 0) and np.all(np.diff(a_tilde) <= 0)
            assert np.all(_strict_where_resolved(a, q, params.bh) < 0)
            assert np.all(_strict_where_resolved(a_tilde, q, params.bh) < 0)
        else:
            assert np.all(a_tilde < 1.0)
            assert np.all(np.diff(a) >= 0) and np.all(np.diff(a_tilde) >= 0)
            assert np.all(_strict_where_resolved(a, q, params.bh) > 0)
            assert np.all(_strict_where_resolved(a_tilde, q, params.bh) > 0)


def test_threshold_index_is_sharp_for_random_outbreaks():
    rng = np.random.default_rng(11)
    for _ in range(200):
        c = rng.uniform(0.01, 2.0)
        params = SirParameters(b=c * rng.uniform(1.2, 4.0), c=c, h=rng.uniform(0.01, 1.0))
        init = InitialState(x0=rng.uniform(0.1, 10.0), y0=rng.uniform(0.1, 10.0))
        threshold = convergence_diagnostics(init, params, 1)
        p = threshold.p_threshold
        a_tilde = convergence_diagnostics(init, params, p + 200).a_tilde_seq
        assert threshold.p_verified
        assert np.all(a_tilde[p - 1 :] < 1.0)
        if p > 1:
            assert a_tilde[p - 2] >= 1.0


def test_nsfd_is_first_order(init, outbreak_params):
    estimate = estimate_order(Scheme.NSFD, init, outbreak_params, 5.0, REFINEMENT)
    assert 0.8 <= estimate.estimated_order <= 1.2
    assert list(estimate.errors) == sorted(estimate.errors, reverse=True)


def test_rk4_is_fourth_order(init, outbreak_params):
    estimate = estimate_order(Scheme.RK4, init, outbreak_params, 5.0, REFINEMENT)
    assert 3.5 <= estimate.estimated_order <= 4.5


def test_repeated_step_size_has_order_zero(init, outbreak_params):
    estimate = estimate_order(Scheme.FORWARD_EULER, init, outbreak_params, 5.0, (0.05, 0.05))
    assert estimate.errors[0] == estimate.errors[1]
    assert estimate.estimated_order == 0.0


def test_exact_discrete_and_nsfd_are_the_same_map(init, outbreak_params):
    estimate = estimate_order(
        Scheme.EXACT_DISCRETE, init, outbreak_params, 5.0, REFINEMENT, reference=Scheme.NSFD
    )
    assert max(estimate.errors) <= 1e-9


def test_order_estimation_refuses_the_flawed_scheme(init, outbreak_params):
    with pytest.raises(SchemeError):
        estimate_order(Scheme.FLAWED_DYNAMIC, init, outbreak_params, 5.0, (1.0, 0.5))


def test_order_estimation_needs_unequal_rates_for_the_closed_form(init):
    with pytest.raises(ParameterError):
        estimate_order(Scheme.NSFD, init, SirParameters(b=0.2, c=0.2), 5.0, (0.1, 0.05))


@pytest.mark.parametrize("h_values", [(0.1,), (0.05, 0.1), (0.3, 0.15)])
def test_order_estimation_rejects_bad_refinements(init, outbreak_params, h_values):
    with pytest.raises(ValidationError):
        estimate_order(Scheme.NSFD, init, outbreak_params, 5.0, h_values)


def test_negativity_counterexample():
    violation = detect_negativity(InitialState(x0=0.6, y0=0.4), 1.5, 0.1, 10)
    assert violation.step == 1
    assert violation.component == "x"
    assert violation.value == pytest.approx(-1.2, abs=1e-12)


def test_mild_rates_stay_positive(init):
    assert detect_negativity(init, [0.3] * 1000, [0.1] * 1000, 1000) is None


def test_no_steps_no_violation():
    assert detect_negativity(InitialState(x0=0.6, y0=0.4), 1.5, 0.1, 0) is None


def test_fast_transmission_always_breaks_the_flawed_scheme_at_once():
    rng = np.random.default_rng(3)
    for _ in range(500):
        c = rng.uniform(0.01, 5.0)
        b = 1.0 + c + rng.uniform(1e-3, 10.0)
        init = InitialState(
            x0=rng.uniform(0.01, 100.0), y0=rng.uniform(0.01, 100.0), z0=rng.uniform(0, 100.0)
        )
        violation = detect_negativity(init, b, c, 5)
        assert violation is not None and violation.step == 1
        assert math.isfinite(violation.value)


def test_negativity_agrees_with_stepping_the_flawed_scheme():
    rng = np.random.default_rng(11)
    for _ in range(200):
        init = InitialState(x0=rng.uniform(0.1, 2.0), y0=rng.uniform(0.1, 2.0))
        b = list(rng.uniform(0.1, 2.5, size=8))
        c = list(rng.uniform(0.1, 1.0, size=8))
        violation = detect_negativity(init, b, c, 8)

        state, expected = init.as_state(), None
        for k in range(8):
            state = flawed_step(state, b[k], c[k])
            negative = state.first_negative()
            if negative is not None:
                expected = (k + 1, *negative)
                break
        assert (tuple(violation) if violation else None) == expected
