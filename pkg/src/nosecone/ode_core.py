"""Explicit fixed-step Runge-Kutta integration.

The integrators here are deliberately plain: a uniform step, an optional
stop predicate checked after every completed step, and no error control.
States are 1-d numpy arrays; for a second-order equation the state is
``(y, dy/dx)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import MaxStepsExceeded, ValidationError

RHS = Callable[[float, np.ndarray], np.ndarray]
StopPredicate = Callable[[float, np.ndarray], bool]

DEFAULT_MAX_STEPS = 10**7

F = Fraction

# Heun's second-order method (explicit trapezoid).
_HEUN = (
    (F(0), F(1)),
    ((), (F(1),)),
    (F(1, 2), F(1, 2)),
    2,
)

_CLASSICAL_RK4 = (
    (F(0), F(1, 2), F(1, 2), F(1)),
    ((), (F(1, 2),), (F(0), F(1, 2)), (F(0), F(0), F(1))),
    (F(1, 6), F(1, 3), F(1, 3), F(1, 6)),
    4,
)

# Butcher's seven-stage sixth-order method.
_BUTCHER_RK6 = (
    (F(0), F(1, 3), F(2, 3), F(1, 3), F(1, 2), F(1, 2), F(1)),
    (
        (),
        (F(1, 3),),
        (F(0), F(2, 3)),
        (F(1, 12), F(1, 3), F(-1, 12)),
        (F(-1, 16), F(9, 8), F(-3, 16), F(-3, 8)),
        (F(0), F(9, 8), F(-3, 8), F(-3, 4), F(1, 2)),
        (F(9, 44), F(-9, 11), F(63, 44), F(18, 11), F(0), F(-16, 11)),
    ),
    (F(11, 120), F(0), F(27, 40), F(27, 40), F(-4, 15), F(-4, 15), F(11, 120)),
    6,
)

_TABLES = {"RK2": _HEUN, "RK4": _CLASSICAL_RK4, "RK6": _BUTCHER_RK6}
METHODS = tuple(_TABLES)


@dataclass(frozen=True)
class RKTableau:
    """Butcher coefficients of one explicit Runge-Kutta scheme.

    ``stage_weights[i]`` holds the ``i`` coefficients ``a_ij`` for ``j < i``,
    so the matrix is strictly lower triangular by construction.
    """

    name: str
    node_coefficients: tuple
    stage_weights: tuple
    output_weights: tuple
    order: int

    def __post_init__(self):
        s = len(self.node_coefficients)
        if len(self.output_weights) != s or len(self.stage_weights) != s:
            raise ValidationError("tableau arrays disagree on the stage count")
        for i, row in enumerate(self.stage_weights):
            if len(row) != i:
                raise ValidationError(f"stage {i} must have {i} coefficients (explicit scheme)")

    @property
    def stages(self) -> int:
        return len(self.node_coefficients)

    @cached_property
    def _plan(self):
        # nonzero coefficients only; zeros are skipped in rk_step
        rows = tuple(
            (ci, tuple((j, aij) for j, aij in enumerate(row) if aij))
            for ci, row in zip(self.node_coefficients, self.stage_weights)
        )
        out = tuple((i, bi) for i, bi in enumerate(self.output_weights) if bi)
        return rows, out


def make_tableau(method_id: str, exact: bool = False) -> RKTableau:
    """Return the tableau for ``"RK2"``, ``"RK4"`` or ``"RK6"`` (case-insensitive).

    With ``exact=True`` the coefficients are :class:`fractions.Fraction`
    instances, useful for checking order conditions or for integrating in
    extended precision.
    """
    key = str(method_id).upper()
    if key not in _TABLES:
        raise ValidationError(f"unknown method {method_id!r}; expected one of {METHODS}")
    c, a, b, order = _TABLES[key]
    conv = (lambda v: v) if exact else float
    return RKTableau(
        name=key,
        node_coefficients=tuple(conv(v) for v in c),
        stage_weights=tuple(tuple(conv(v) for v in row) for row in a),
        output_weights=tuple(conv(v) for v in b),
        order=order,
    )


def rk_step(f: RHS, x, state, step, tableau: RKTableau):
    """Advance ``state`` from ``x`` by one step of size ``step``."""
    if not step > 0:
        raise ValidationError(f"step must be positive, got {step}")
    rows, weights = tableau._plan
    k = []
    for ci, row in rows:
        inc = state
        for j, aij in row:
            inc = inc + (step * aij) * k[j]
        k.append(f(x + ci * step, inc))
    out = state
    for i, bi in weights:
        out = out + (step * bi) * k[i]
    return out


@dataclass(frozen=True)
class GridSolution:
    """Discrete trajectory ``(x_k, y_k, y'_k)`` of a second-order solve."""

    abscissae: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray

    def __post_init__(self):
        n = len(self.abscissae)
        if len(self.values) != n or len(self.derivatives) != n:
            raise ValidationError("abscissae, values and derivatives differ in length")
        if n < 1:
            raise ValidationError("a GridSolution needs at least one sample")
        if n > 1 and not np.all(np.diff(self.abscissae) > 0):
            raise ValidationError("abscissae must be strictly increasing")

    def __len__(self):
        return len(self.abscissae)

    @classmethod
    def from_states(cls, xs: Sequence[float], states: Sequence[np.ndarray]) -> "GridSolution":
        arr = np.asarray(states, dtype=float)
        return cls(np.asarray(xs, dtype=float), arr[:, 0].copy(), arr[:, 1].copy())

    def replace_last(self, x: float, y: float, dydx: float) -> "GridSolution":
        return GridSolution(
            np.append(self.abscissae[:-1], x),
            np.append(self.values[:-1], y),
            np.append(self.derivatives[:-1], dydx),
        )


def integrate_fixed(
    f: RHS,
    x0: float,
    state0,
    step: float,
    stop: StopPredicate,
    tableau: RKTableau,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> GridSolution:
    """Integrate on the uniform grid ``x0 + k*step`` until ``stop`` fires.

    ``stop(x, state)`` is checked after each completed step, and the sample
    that triggered it is the last one kept. Nodes are computed as
    ``x0 + k*step`` rather than accumulated, so the grid carries no drift.
    """
    if not step > 0:
        raise ValidationError(f"step must be positive, got {step}")
    if max_steps <= 0:
        raise ValidationError("max_steps must be positive")
    state = np.asarray(state0, dtype=float)
    xs = [float(x0)]
    states = [state]
    x = float(x0)
    for k in range(1, max_steps + 1):
        state = rk_step(f, x, state, step, tableau)
        x = x0 + k * step
        xs.append(x)
        states.append(state)
        if stop(x, state):
            return GridSolution.from_states(xs, states)
    raise MaxStepsExceeded(f"stop condition not met within {max_steps} steps")


def integrate_to(f: RHS, x0: float, state0, x_end: float, step: float, tableau: RKTableau) -> GridSolution:
    """Uniform steps from ``x0``; the last step is shortened to land on ``x_end``."""
    if not step > 0:
        raise ValidationError(f"step must be positive, got {step}")
    if not x_end > x0:
        raise ValidationError(f"x_end={x_end} must exceed x0={x0}")
    n_full = int(np.floor((x_end - x0) / step))
    # drop a full step that would leave a sliver below round-off
    if n_full and x_end - (x0 + n_full * step) <= 1e-12 * step:
        n_full -= 1
    state = np.asarray(state0, dtype=float)
    xs = [float(x0)]
    states = [state]
    x = float(x0)
    for k in range(1, n_full + 1):
        state = rk_step(f, x, state, step, tableau)
        x = x0 + k * step
        xs.append(x)
        states.append(state)
    state = rk_step(f, x, state, x_end - x, tableau)
    xs.append(float(x_end))
    states.append(state)
    return GridSolution.from_states(xs, states)


class CountingRHS:
    """Wrap a right-hand side and count its evaluations."""

    def __init__(self, f: RHS):
        self.f = f
        self.calls = 0

    def __call__(self, x, state):
        self.calls += 1
        return self.f(x, state)
