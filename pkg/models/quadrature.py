"""Adaptive Simpson quadrature and a cumulative-integral interpolant built on it."""

from typing import Callable, List, NamedTuple, Tuple

import numpy as np

from utils.exceptions import QuadratureError, ValidationError

DEFAULT_TOL = 1e-10
DEFAULT_MAX_SUBDIVISIONS = 2**20


class SimpsonPanel(NamedTuple):
    """A Simpson panel [a, b] with the integrand at a, the midpoint and b."""

    a: float
    b: float
    fa: float
    fm: float
    fb: float

    @property
    def integral(self) -> float:
        return (self.b - self.a) / 6.0 * (self.fa + 4.0 * self.fm + self.fb)


class QuadratureResult(NamedTuple):
    value: float
    error: float
    subdivisions: int
    panels: Tuple[SimpsonPanel, ...]


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS,
    keep_panels: bool = False,
) -> QuadratureResult:
    """
    Adaptive Simpson's rule with Richardson-corrected leaves.

    Each accepted interval contributes its two half-panels; the tolerance is halved on
    every subdivision so the leaf errors sum to at most ``tol``.

    Args:
        f: Integrand.
        a: Lower bound (a <= b).
        b: Upper bound.
        tol: Absolute error tolerance.
        max_subdivisions: Budget of interval splits.
        keep_panels: Return the accepted half-panels in left-to-right order.

    Returns:
        QuadratureResult with the integral, the summed error estimate, the number of
        subdivisions used and (optionally) the panels.

    Raises:
        QuadratureError: If the budget is exhausted before the tolerance is met.
    """
    if b < a:
        raise ValidationError(
            f"integration bounds must satisfy a <= b, got [{a}, {b}]",
            error_code="VALIDATION_ERROR",
            details={"errors": ["bounds: a must not exceed b"], "fields": ["a", "b"]},
        )
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, ())

    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    # Work stack of (a, b, fa, fm, fb, tol); the right half is pushed first so leaves
    # come out in order.
    stack: List[Tuple[float, float, float, float, float, float]] = [(a, b, fa, fm, fb, tol)]
    total = 0.0
    error = 0.0
    subdivisions = 0
    panels: List[SimpsonPanel] = []

    while stack:
        lo, hi, flo, fmid, fhi, local_tol = stack.pop()
        mid = 0.5 * (lo + hi)
        f_left = f(0.5 * (lo + mid))
        f_right = f(0.5 * (mid + hi))

        whole = SimpsonPanel(lo, hi, flo, fmid, fhi).integral
        left = SimpsonPanel(lo, mid, flo, f_left, fmid)
        right = SimpsonPanel(mid, hi, fmid, f_right, fhi)
        combined = left.integral + right.integral
        estimate = (combined - whole) / 15.0

        if abs(estimate) <= local_tol or mid in (lo, hi):
            total += combined + estimate
            error += abs(estimate)
            if keep_panels:
                panels.extend((left, right))
            continue

        subdivisions += 1
        if subdivisions > max_subdivisions:
            raise QuadratureError(
                "adaptive Simpson exceeded its subdivision budget",
                error_code="QUADRATURE_BUDGET",
                details={"max_subdivisions": max_subdivisions, "tol": tol, "interval": (a, b)},
            )
        stack.append((mid, hi, fmid, f_right, fhi, 0.5 * local_tol))
        stack.append((lo, mid, flo, f_left, fmid, 0.5 * local_tol))

    return QuadratureResult(total, error, subdivisions, tuple(panels))


class CumulativeIntegral:
    """
    G(s) = integral of g from a to s, for any s in [a, b].

    Built once from the adaptive Simpson panels of g; inside a panel G is the exact
    integral of the quadratic through the panel's three samples.
    """

    def __init__(
        self,
        g: Callable[[float], float],
        a: float,
        b: float,
        tol: float = DEFAULT_TOL,
        max_subdivisions: int = DEFAULT_MAX_SUBDIVISIONS,
    ):
        self.a = a
        self.b = b
        result = adaptive_simpson(g, a, b, tol, max_subdivisions, keep_panels=True)
        self.subdivisions = result.subdivisions
        if not result.panels:
            self._starts = np.array([a])
            self._widths = np.array([0.0])
            self._samples = np.zeros((1, 3))
            self._cumulative = np.array([0.0])
            return

        self._starts = np.array([p.a for p in result.panels])
        self._widths = np.array([p.b - p.a for p in result.panels])
        self._samples = np.array([(p.fa, p.fm, p.fb) for p in result.panels])
        integrals = np.array([p.integral for p in result.panels])
        self._cumulative = np.concatenate(([0.0], np.cumsum(integrals)[:-1]))

    def __len__(self) -> int:
        return len(self._starts)

    def __call__(self, s: float) -> float:
        if s <= self.a:
            return 0.0
        i = int(np.searchsorted(self._starts, s, side="right")) - 1
        i = min(max(i, 0), len(self._starts) - 1)
        width = self._widths[i]
        if width == 0.0:
            return float(self._cumulative[i])
        theta = min((s - self._starts[i]) / width, 1.0)
        fa, fm, fb = self._samples[i]
        # Integrals of the quadratic Lagrange basis on nodes 0, 1/2, 1 from 0 to theta
        t2, t3 = theta * theta, theta * theta * theta
        w0 = 2.0 / 3.0 * t3 - 1.5 * t2 + theta
        w1 = -4.0 / 3.0 * t3 + 2.0 * t2
        w2 = 2.0 / 3.0 * t3 - 0.5 * t2
        return float(self._cumulative[i] + width * (fa * w0 + fm * w1 + fb * w2))
