"""Newton's minimal-resistance nose cone as a free boundary problem.

Solved without iteration by a scaling-group transformation method, checked
against a shooting baseline, with drag coefficients of the classical shapes
and the similarity function ``a = h f(r/h)``.
"""
from .errors import *  # noqa: F401,F403
from .newton_model import NoseConeGeometry, drag_reduced, frustum_optimize, make_shape, numerical_shape, rhs_newton
from .ode_core import GridSolution, RKTableau, integrate_fixed, integrate_to, make_tableau, rk_step
from .shooting import ShootingResult, shoot_bisection, shoot_secant, shooting_residual
from .similarity import closed_form_residual, invariants_of, reduced_rhs, sweep_f, verify_reduction
from .transform_method import (
    GeneralFBPSpec,
    TMResult,
    event_last_step,
    newton_kernel,
    rescale,
    solve_general_fbp,
    solve_newton_fbp,
)

__version__ = "0.1.0"
