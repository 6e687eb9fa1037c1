"""Similarity products: the function ``f`` in ``a = h f(r/h)`` and the reduced ODE.

With the scale invariants ``u = y/x`` and ``s = y'`` the profile equation
drops to first order,

    du/ds = (s - u)(3 s^2 - 1) / (s (s^2 + 1)),

whose general solution is

    u(s) = (s (s^2 - ln s + 3 s^4 / 4) + C s) / (s^2 + 1)^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import NoseConeError, SingularAbscissa, SingularSlope, ValidationError
from .newton_model import NoseConeGeometry, drag_reduced, numerical_shape
from .transform_method import TMResult, solve_newton_fbp

DEFAULT_R_GRID = tuple(round(0.2 * k, 10) for k in range(1, 11))
FD_STEP = 1e-6


@dataclass(frozen=True)
class SweepSettings:
    a_star: float = 0.5
    step: float = 1e-3
    method: str = "RK4"
    locator: str = "mesh"


@dataclass(frozen=True)
class SweepRow:
    r: float
    h: float
    a: Optional[float] = None
    terminal_slope: Optional[float] = None
    k_star: Optional[float] = None
    status: str = "ok"

    @property
    def r_over_h(self) -> float:
        return self.r / self.h

    @property
    def f_value(self) -> Optional[float]:
        return None if self.a is None else self.a / self.h

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def parabola(self, coefficient: float = 0.3) -> float:
        return coefficient * self.r_over_h**2


@dataclass(frozen=True)
class SweepTable:
    rows: tuple
    settings: SweepSettings = field(default_factory=SweepSettings)

    def f(self, r_over_h: float) -> float:
        for row in self.rows:
            if math.isclose(row.r_over_h, r_over_h, rel_tol=1e-12) and row.ok:
                return row.f_value
        raise KeyError(r_over_h)


def _sweep_row(r, h, settings):
    try:
        geometry = NoseConeGeometry(r, h)
        tm = solve_newton_fbp(geometry, settings.a_star, settings.step, settings.method, settings.locator)
        k = drag_reduced(numerical_shape(tm.solution, tm.free_boundary), geometry).k_star
    except NoseConeError as exc:
        return SweepRow(r, h, status=f"{type(exc).__name__}: {exc}")
    return SweepRow(r, h, tm.free_boundary, tm.terminal_slope, k)


def sweep_f(r_values: Iterable[float] = DEFAULT_R_GRID, h: float = 1.0, settings: Optional[SweepSettings] = None,
            pairs: Optional[Iterable[tuple]] = None) -> SweepTable:
    """Tabulate ``a``, ``f = a/h``, slope and ``k*`` over a set of geometries.

    ``pairs`` of ``(r, h)`` may be given instead of ``r_values`` with a
    common ``h``. Failed rows carry the error in ``status``.
    """
    settings = settings or SweepSettings()
    if pairs is None:
        pairs = [(float(r), float(h)) for r in r_values]
    else:
        pairs = [(float(r), float(hh)) for r, hh in pairs]
    if not pairs:
        raise ValidationError("sweep grid is empty")
    rows = [_sweep_row(r, hh, settings) for r, hh in pairs]
    rows.sort(key=lambda row: (row.r_over_h, row.h))
    return SweepTable(tuple(rows), settings)


def invariants_of(x, y, s):
    """Scale invariants ``(u, s) = (y/x, dy/dx)``."""
    if np.any(np.asarray(x) == 0):
        raise SingularAbscissa("u = y/x is undefined at x = 0")
    return np.asarray(y) / np.asarray(x) if np.ndim(x) else y / x, s


def reduced_rhs(s, u):
    if abs(s) <= 1e-12:
        raise SingularSlope(f"reduced equation is singular at s={s}")
    return (s - u) * (3.0 * s * s - 1.0) / (s * (s * s + 1.0))


def closed_form_u(s, C):
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValidationError("closed form needs s > 0 (logarithm)")
    return (s * (s**2 - np.log(s) + 0.75 * s**4) + C * s) / (s**2 + 1.0) ** 2


def fit_constant(s, u):
    """Integration constant ``C`` that puts ``(s, u)`` on the closed-form curve."""
    return (u * (s * s + 1.0) ** 2 - s * (s * s - math.log(s) + 0.75 * s**4)) / s


def closed_form_residual(s: float, C: float, fd_step: float = FD_STEP) -> float:
    """Central-difference ``du/ds`` of the closed form minus the reduced right-hand side."""
    if not s > fd_step:
        raise ValidationError("closed form needs s > 0 (logarithm)")
    du = (closed_form_u(s + fd_step, C) - closed_form_u(s - fd_step, C)) / (2.0 * fd_step)
    return float(du - reduced_rhs(s, float(closed_form_u(s, C))))


def verify_reduction(tm_result: TMResult) -> float:
    """Largest gap between a computed profile and its closed-form invariant curve.

    ``C`` is fitted at the middle node; the trajectory is then compared node
    by node in the ``(s, u)`` plane.
    """
    sol = tm_result.solution
    if len(sol) < 2:
        return 0.0
    u, s = invariants_of(sol.abscissae, sol.values, sol.derivatives)
    mid = len(s) // 2
    C = fit_constant(float(s[mid]), float(u[mid]))
    return float(np.max(np.abs(u - closed_form_u(s, C))))
