"""Iterative shooting baseline.

The tip radius ``a`` is treated as an unknown parameter: integrate from
``y(a) = 0, y'(a) = 1`` to ``x = r`` and drive ``F(a) = y(r; a) - h`` to
zero with bisection or the secant method. Both stop on the relative
criterion ``|2 (a_k - a_{k-1})| <= tol |a_k + a_{k-1}|`` between
consecutive iterates.

``F`` is decreasing in ``a``: a wider flat tip leaves less room to climb.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MaxIterationsExceeded, NoBracket, SecantBreakdown, ValidationError
from .newton_model import NoseConeGeometry, rhs_newton
from .ode_core import CountingRHS, integrate_to, make_tableau

DEFAULT_STEP = 1e-4
TERMINATION_TOL = 1e-6
SECANT_MAXITER = 100
BISECTION_MAXITER = 200


@dataclass
class ShootingResult:
    free_boundary: float
    terminal_slope: float
    iterations: int
    history: list = field(default_factory=list)
    converged: bool = False
    rhs_evals: int = 0
    method: str = ""

    @property
    def a(self) -> float:
        return self.free_boundary

    @property
    def evaluations(self) -> int:
        """Residual evaluations, seeds included."""
        return len(self.history)


def _shoot(a, geometry, step, method, counter=None):
    if not 0 < a < geometry.r:
        raise ValidationError(f"tip radius must lie in (0, r={geometry.r}), got {a}")
    f = counter if counter is not None else rhs_newton
    grid = integrate_to(f, a, (0.0, 1.0), geometry.r, step, make_tableau(method))
    return grid.values[-1] - geometry.h, grid.derivatives[-1]


def shooting_residual(a: float, geometry: NoseConeGeometry, step: float = DEFAULT_STEP, method: str = "RK4") -> float:
    """``y(r; a) - h`` for the profile started at tip radius ``a``."""
    return float(_shoot(a, geometry, step, method)[0])


def terminated(a_new: float, a_old: float, tol: float = TERMINATION_TOL) -> bool:
    return abs(2.0 * (a_new - a_old)) <= tol * abs(a_new + a_old)


def shoot_bisection(
    geometry: NoseConeGeometry,
    a_lo: float = 0.3,
    a_hi: float = 0.5,
    step: float = DEFAULT_STEP,
    method: str = "RK4",
    tol: float = TERMINATION_TOL,
) -> ShootingResult:
    """Bisection on ``F``; one iteration is one halving of the bracket.

    ``history`` holds ``(a, F(a))`` for the two endpoints followed by every
    midpoint.
    """
    counter = CountingRHS(rhs_newton)
    f_lo, _ = _shoot(a_lo, geometry, step, method, counter)
    f_hi, _ = _shoot(a_hi, geometry, step, method, counter)
    history = [(a_lo, f_lo), (a_hi, f_hi)]
    if f_lo * f_hi > 0:
        raise NoBracket(f"F has the same sign at a={a_lo} ({f_lo:.3e}) and a={a_hi} ({f_hi:.3e})")
    prev = None
    for k in range(1, BISECTION_MAXITER + 1):
        mid = 0.5 * (a_lo + a_hi)
        f_mid, slope = _shoot(mid, geometry, step, method, counter)
        history.append((mid, f_mid))
        if f_mid == 0 or (prev is not None and terminated(mid, prev, tol)):
            return ShootingResult(mid, float(slope), k, history, True, counter.calls, "bisection")
        if f_lo * f_mid < 0:
            a_hi, f_hi = mid, f_mid
        else:
            a_lo, f_lo = mid, f_mid
        prev = mid
    raise MaxIterationsExceeded(f"bisection did not terminate in {BISECTION_MAXITER} iterations")


def shoot_secant(
    geometry: NoseConeGeometry,
    a0: float = 0.5,
    a1: float = 0.3,
    step: float = DEFAULT_STEP,
    method: str = "RK4",
    tol: float = TERMINATION_TOL,
    max_iterations: int = SECANT_MAXITER,
) -> ShootingResult:
    """Secant iteration on ``F`` from the two seeds ``a0, a1``."""
    if a0 == a1:
        raise ValidationError("secant seeds must differ")
    counter = CountingRHS(rhs_newton)
    f0, _ = _shoot(a0, geometry, step, method, counter)
    f1, slope = _shoot(a1, geometry, step, method, counter)
    history = [(a0, f0), (a1, f1)]
    for k in range(1, max_iterations + 1):
        if abs(f1 - f0) < 1e-14:
            raise SecantBreakdown(f"F(a_k) - F(a_k-1) = {f1 - f0:.3e} at iteration {k}")
        a2 = a1 - f1 * (a1 - a0) / (f1 - f0)
        if not 0 < a2 < geometry.r:
            raise SecantBreakdown(f"secant iterate {a2} left (0, r)")
        f2, slope = _shoot(a2, geometry, step, method, counter)
        history.append((a2, f2))
        a0, f0, a1, f1 = a1, f1, a2, f2
        if f1 == 0 or terminated(a1, a0, tol):
            return ShootingResult(a1, float(slope), k, history, True, counter.calls, "secant")
    raise MaxIterationsExceeded(f"secant did not terminate in {max_iterations} iterations")
