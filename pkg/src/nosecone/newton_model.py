"""Newton's nose-cone model: the optimal-profile ODE, classical shapes, drag.

The reduced drag coefficient of a profile ``y(x)`` on ``[a, r]`` with a flat
tip of radius ``a`` is

    k* = (a**2 + integral_a^r 2x / (y'(x)**2 + 1) dx) / r**2

which equals 1 for a flat disk and 1/2 for a cone with unit slope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson, trapezoid

from .errors import GeometryMismatch, SingularAbscissa, SingularSlope, ValidationError
from .ode_core import GridSolution

SLOPE_GUARD = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NoseConeGeometry:
    r: float
    h: float

    def __post_init__(self):
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValidationError(f"nose radius r must be > 0, got {self.r}")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValidationError(f"nose height h must be > 0, got {self.h}")

    def scaled(self, factor: float) -> "NoseConeGeometry":
        return NoseConeGeometry(factor * self.r, factor * self.h)


def rhs_newton(x, state):
    """Right-hand side of the optimal-profile equation as a first-order system.

    ``state = (y, s)`` with ``s = dy/dx``; returns ``(s, s(s^2+1) / (x(3s^2-1)))``.
    The second component does not depend on ``y``.
    """
    s = state[1]
    if not x > 0:
        raise SingularAbscissa(f"equation is singular at x <= 0 (x={x})")
    denom = 3.0 * s * s - 1.0
    if abs(denom) < SLOPE_GUARD:
        raise SingularSlope(f"3 s^2 - 1 vanishes at s={s}")
    return np.array([s, s * (s * s + 1.0) / (x * denom)])


class ShapeKind(str, Enum):
    HEMISPHERE = "hemisphere"
    POINTED_CONE = "pointed_cone"
    PARABOLOID = "paraboloid"
    CONICAL_FRUSTUM = "conical_frustum"
    NUMERICAL = "numerical"


@dataclass(frozen=True)
class ShapeProfile:
    """A nose profile on ``[tip_radius, r]``.

    Closed-form shapes carry ``func(x) -> (y, dy/dx)`` (vectorised over
    numpy arrays); numerical ones carry the ``grid`` they were solved on.
    """

    kind: ShapeKind
    tip_radius: float
    r: float
    func: Optional[Callable] = field(default=None, compare=False)
    grid: Optional[GridSolution] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.tip_radius < self.r:
            raise ValidationError(f"tip radius {self.tip_radius} must lie in [0, r={self.r})")
        if (self.func is None) == (self.grid is None):
            raise ValidationError("provide exactly one of func or grid")

    def __call__(self, x):
        if self.func is not None:
            return self.func(x)
        g = self.grid
        return np.interp(x, g.abscissae, g.values), np.interp(x, g.abscissae, g.derivatives)


def _hemisphere(r, h):
    def func(x):
        x = np.asarray(x, dtype=float)
        root = np.sqrt(np.maximum(r * r - x * x, 0.0))
        with np.errstate(divide="ignore"):
            slope = np.where(root > 0, x / np.where(root > 0, root, 1.0), np.inf)
        return h - root, slope
    return func


def make_shape(kind, geometry: NoseConeGeometry, tip_radius: float = 0.0) -> ShapeProfile:
    """Closed-form profile for one of the classical shapes.

    The curve starts at the tip plane: ``y = 0`` at the tip and ``y = h`` at
    the rim ``x = r``. ``tip_radius`` is only used by the conical frustum.
    """
    kind = ShapeKind(kind)
    r, h = geometry.r, geometry.h
    if kind is ShapeKind.HEMISPHERE:
        if not math.isclose(r, h, rel_tol=1e-12):
            raise GeometryMismatch(f"a hemisphere needs r == h (got r={r}, h={h})")
        return ShapeProfile(kind, 0.0, r, func=_hemisphere(r, h))
    if kind is ShapeKind.POINTED_CONE:
        m = h / r
        return ShapeProfile(kind, 0.0, r, func=lambda x: (m * np.asarray(x), np.full_like(np.asarray(x, float), m)))
    if kind is ShapeKind.PARABOLOID:
        return ShapeProfile(
            kind, 0.0, r, func=lambda x: (h * (np.asarray(x) / r) ** 2, 2.0 * h * np.asarray(x) / r**2)
        )
    if kind is ShapeKind.CONICAL_FRUSTUM:
        a = float(tip_radius)
        if not 0 <= a < r:
            raise ValidationError(f"frustum tip radius must lie in [0, r), got {a}")
        m = h / (r - a)
        return ShapeProfile(
            kind, a, r, func=lambda x: (m * (np.asarray(x) - a), np.full_like(np.asarray(x, float), m))
        )
    raise ValidationError("numerical profiles come from numerical_shape()")


def numerical_shape(grid: GridSolution, tip_radius: float, r: Optional[float] = None) -> ShapeProfile:
    if r is None:
        r = float(grid.abscissae[-1])
    return ShapeProfile(ShapeKind.NUMERICAL, float(tip_radius), float(r), grid=grid)


@dataclass(frozen=True)
class DragReport:
    k_star: float
    quadrature_step: float
    shape: ShapeProfile


def _integrand(x, slope):
    return 2.0 * x / (slope * slope + 1.0)


def drag_reduced(shape: ShapeProfile, geometry: NoseConeGeometry, quadrature_step: float = 1e-3) -> DragReport:
    """Reduced drag coefficient ``k*`` of ``shape``.

    Closed-form shapes use composite Simpson on a uniform grid no coarser
    than ``quadrature_step``. Numerical profiles use the trapezoid rule on
    the solver's own nodes and ignore ``quadrature_step``.
    """
    if not quadrature_step > 0:
        raise ValidationError("quadrature_step must be positive")
    a = shape.tip_radius
    if shape.grid is not None:
        g = shape.grid
        integral = trapezoid(_integrand(g.abscissae, g.derivatives), g.abscissae)
    else:
        n = max(2, int(math.ceil((shape.r - a) / quadrature_step)))
        n += n % 2
        xs = np.linspace(a, shape.r, n + 1)
        _, slope = shape(xs)
        integral = simpson(_integrand(xs, slope), x=xs)
    k_star = (a * a + integral) / geometry.r**2
    return DragReport(float(k_star), quadrature_step, shape)


def frustum_drag(a: float, geometry: NoseConeGeometry) -> float:
    """Closed-form ``k*`` of the flat-tipped frustum with tip radius ``a``."""
    r, h = geometry.r, geometry.h
    if a >= r:
        return 1.0
    m = h / (r - a)
    return (a * a + (r * r - a * a) / (m * m + 1.0)) / (r * r)


def golden_section(func: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Minimiser of a unimodal ``func`` on ``[lo, hi]`` to bracket width ``tol``."""
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = func(c), func(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = func(d)
    return 0.5 * (lo + hi)


def frustum_optimize(geometry: NoseConeGeometry, search_tolerance: float = 1e-10):
    """Best flat-tipped frustum: returns ``(a_opt, k_star_opt)``."""
    a_opt = golden_section(lambda a: frustum_drag(a, geometry), 0.0, geometry.r, search_tolerance)
    return a_opt, frustum_drag(a_opt, geometry)
