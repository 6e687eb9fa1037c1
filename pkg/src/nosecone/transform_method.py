"""Non-iterative transformation method for scaling-invariant free boundary problems.

The optimal-profile problem

    y'' = y'(y'^2 + 1) / (x (3 y'^2 - 1)),   y(a) = 0, y'(a) = 1, y(r) = h

is invariant under ``x -> lam x, a -> lam a, y -> lam y`` except for the
end condition. So one initial value problem is solved from an arbitrary
tip ``a*``, integrated until it meets the ray ``y* = (h/r) x*``, and the
group parameter ``lam = y*(r*)/h`` maps everything back to the physical
problem. No iteration on the unknown tip radius is needed.

The same recipe covers the class

    y'' = y^(1-2d) phi(x y^-d, y' y^(d-1)),
    y(a) = alpha a^(1/d), y'(a) = beta a^(1/d - 1), y(r) = h

under ``x -> lam^d x, y -> lam y``.

Event location
--------------
Integration stops at the first mesh node past the end ray; the final
step is then repeated with a shorter step. Three rules for that step:

``"mesh"``
    ``dx_u = (T(x_{k-1}) - y_{k-1}) dx / (y_k - y_{k-1})`` where ``T`` is the
    end curve evaluated at the last accepted node. This is the rule that
    reproduces the published reference table to all printed digits; the
    landing point misses the end ray by O(dx).
``"chord"``
    Intersect the chord through the last two nodes with the end curve
    (linearised across the interval). Residual O(dx^2).
``"refine"``
    Start from the chord step and run a secant iteration on the step size
    until the end condition holds to ``REFINE_TOL``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateChord,
    EventNotReached,
    MaxIterationsExceeded,
    MaxStepsExceeded,
    PhiDomainError,
    ValidationError,
)
from .newton_model import NoseConeGeometry, rhs_newton
from .ode_core import DEFAULT_MAX_STEPS, CountingRHS, GridSolution, integrate_fixed, make_tableau, rk_step

LOCATORS = ("mesh", "chord", "refine")
CHORD_GUARD = 1e-14
REFINE_TOL = 1e-12
REFINE_MAXITER = 50


@dataclass(frozen=True)
class TMResult:
    free_boundary: float
    lam: float
    terminal_slope: float
    solution: GridSolution
    auxiliary: GridSolution
    r_star: float
    last_step: float
    a_star: float
    step: float
    method: str
    locator: str
    delta: float
    rhs_evals: int
    #: abscissa where the rescaled profile ends, minus r (zero up to the locator's accuracy)
    end_mismatch: float

    @property
    def a(self) -> float:
        return self.free_boundary

    @property
    def n_steps(self) -> int:
        return len(self.auxiliary) - 1


@dataclass(frozen=True)
class GeneralFBPSpec:
    """One member of the scaling-invariant class.

    ``phi(p, q)`` is the kernel evaluated at ``p = x y^-delta`` and
    ``q = y' y^(delta-1)``.
    """

    phi: Callable[[float, float], float]
    delta: float = 1.0
    alpha: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        if self.delta == 0 or not math.isfinite(self.delta):
            raise ValidationError("delta must be a finite non-zero number")

    def rhs(self, x, state):
        y, s = state[0], state[1]
        d = self.delta
        if y == 0.0:
            # limit evaluation at a zero tip value: the powers of y cancel
            # for kernels with the right homogeneity
            y = math.copysign(np.finfo(float).tiny, s) if s != 0 else np.finfo(float).tiny
        try:
            p = x * y ** (-d)
            q = s * y ** (d - 1.0)
            val = y ** (1.0 - 2.0 * d) * self.phi(p, q)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise PhiDomainError(f"kernel not evaluable at x={x}, y={y}, y'={s}: {exc}") from exc
        if isinstance(val, complex) or not math.isfinite(val):
            raise PhiDomainError(f"kernel not evaluable at x={x}, y={y}, y'={s}")
        return np.array([s, val])


def newton_kernel(p, q):
    """Kernel ``phi`` that places the optimal-profile equation in the class (delta = 1)."""
    return q * (q * q + 1.0) / (p * (3.0 * q * q - 1.0))


def _end_curve(x, geometry: NoseConeGeometry, delta: float):
    if delta == 1.0:
        return geometry.h * x / geometry.r
    return geometry.h * (x / geometry.r) ** (1.0 / delta)


def event_last_step(
    x_prev: float,
    y_prev: float,
    y_curr: float,
    step: float,
    geometry: NoseConeGeometry,
    delta: float = 1.0,
    mode: str = "mesh",
) -> float:
    """Length of the shortened final step (see the module docstring for ``mode``)."""
    dy = y_curr - y_prev
    if abs(dy) < CHORD_GUARD:
        raise DegenerateChord(f"flat chord (y_curr - y_prev = {dy:.3e}); cannot locate the event")
    t0 = _end_curve(x_prev, geometry, delta)
    if mode == "mesh":
        return (t0 - y_prev) * step / dy
    if mode in ("chord", "refine"):
        t1 = _end_curve(x_prev + step, geometry, delta)
        denom = dy - (t1 - t0)
        if abs(denom) < CHORD_GUARD:
            raise DegenerateChord("chord parallel to the end curve")
        return step * (t0 - y_prev) / denom
    raise ValidationError(f"unknown locator {mode!r}; expected one of {LOCATORS}")


def rescale(auxiliary: GridSolution, lam: float, delta: float = 1.0) -> GridSolution:
    """Map a starred solution back: ``x = lam^-d x*, y = y*/lam, y' = lam^(d-1) y*'``."""
    if not lam > 0:
        raise ValidationError(f"group parameter must be positive, got {lam}")
    return GridSolution(
        auxiliary.abscissae * lam ** (-delta),
        auxiliary.values / lam,
        auxiliary.derivatives * lam ** (delta - 1.0),
    )


def _refine_step(rhs, x_prev, state_prev, t1, tableau, geometry, delta):
    def g(t):
        st = rk_step(rhs, x_prev, state_prev, t, tableau)
        return _end_curve(x_prev + t, geometry, delta) - st[0]

    t0, g0 = 0.0, _end_curve(x_prev, geometry, delta) - state_prev[0]
    g1 = g(t1)
    tol = REFINE_TOL * max(1.0, geometry.h)
    for _ in range(REFINE_MAXITER):
        if abs(g1) <= tol:
            return t1
        if g1 == g0:
            break
        t0, t1, g0 = t1, t1 - g1 * (t1 - t0) / (g1 - g0), g1
        g1 = g(t1)
    if abs(g1) <= tol:
        return t1
    raise MaxIterationsExceeded("event refinement did not converge")


def _transform_solve(rhs, y0, s0, a_star, geometry, step, method, locator, delta, max_steps):
    if not a_star > 0:
        raise ValidationError(f"a* must be > 0 (the equation is singular at x* = 0), got {a_star}")
    if not step > 0:
        raise ValidationError(f"step must be > 0, got {step}")
    if locator not in LOCATORS:
        raise ValidationError(f"unknown locator {locator!r}; expected one of {LOCATORS}")
    tableau = make_tableau(method)
    counted = CountingRHS(rhs)

    def g(x, y):
        return _end_curve(x, geometry, delta) - y

    g_start = g(a_star, y0)
    if g_start == 0:
        raise ValidationError("the tip already lies on the end curve; the free boundary would equal r")
    side = math.copysign(1.0, g_start)

    try:
        aux = integrate_fixed(
            counted, a_star, (y0, s0), step, lambda x, st: side * g(x, st[0]) <= 0, tableau, max_steps
        )
    except MaxStepsExceeded as exc:
        raise EventNotReached(
            f"end condition y*(x*) = h (x*/r)^(1/delta) not met within {max_steps} steps"
        ) from exc

    x_prev, y_prev = aux.abscissae[-2], aux.values[-2]
    y_curr = aux.values[-1]
    if g(aux.abscissae[-1], y_curr) == 0:
        last = step
    else:
        state_prev = np.array([y_prev, aux.derivatives[-2]])
        last = event_last_step(x_prev, y_prev, y_curr, step, geometry, delta, locator)
        if locator == "refine":
            last = _refine_step(counted, x_prev, state_prev, last, tableau, geometry, delta)
        if last > 0:
            final = rk_step(counted, x_prev, state_prev, last, tableau)
            aux = aux.replace_last(x_prev + last, final[0], final[1])
        else:
            aux = GridSolution(aux.abscissae[:-1], aux.values[:-1], aux.derivatives[:-1])
            last = 0.0

    lam = aux.values[-1] / geometry.h
    if not lam > 0:
        raise EventNotReached(f"non-positive group parameter {lam}")
    solution = rescale(aux, lam, delta)
    return TMResult(
        free_boundary=float(a_star * lam ** (-delta)),
        lam=float(lam),
        terminal_slope=float(solution.derivatives[-1]),
        solution=solution,
        auxiliary=aux,
        r_star=float(aux.abscissae[-1]),
        last_step=float(last),
        a_star=float(a_star),
        step=float(step),
        method=tableau.name,
        locator=locator,
        delta=float(delta),
        rhs_evals=counted.calls,
        end_mismatch=float(solution.abscissae[-1] - geometry.r),
    )


def solve_newton_fbp(
    geometry: NoseConeGeometry,
    a_star: float = 0.5,
    step: float = 1e-3,
    method: str = "RK4",
    locator: str = "mesh",
    max_steps: int = DEFAULT_MAX_STEPS,
) -> TMResult:
    """Solve the optimal nose-cone free boundary problem without iteration."""
    return _transform_solve(rhs_newton, 0.0, 1.0, a_star, geometry, step, method, locator, 1.0, max_steps)


def solve_general_fbp(
    spec: GeneralFBPSpec,
    geometry: NoseConeGeometry,
    a_star: float = 0.5,
    step: float = 1e-3,
    method: str = "RK4",
    locator: str = "mesh",
    max_steps: int = DEFAULT_MAX_STEPS,
) -> TMResult:
    """Transformation method for any member of the scaling-invariant class."""
    d = spec.delta
    y0 = spec.alpha * a_star ** (1.0 / d)
    s0 = spec.beta * a_star ** (1.0 / d - 1.0)
    return _transform_solve(spec.rhs, y0, s0, a_star, geometry, step, method, locator, d, max_steps)
