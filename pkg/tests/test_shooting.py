import numpy as np
import pytest

from nosecone.errors import NoBracket, ValidationError
from nosecone.shooting import shoot_bisection, shoot_secant, shooting_residual, terminated

CONVERGED_A = 0.350942572


def test_residual_near_root(unit):
    assert abs(shooting_residual(0.350943, unit, 1e-4, "RK4")) <= 1e-5


def test_residual_near_rim(unit):
    f = shooting_residual(0.999, unit, 1e-4)
    assert f < 0 and f == pytest.approx(-unit.h, abs=2e-3)


def test_residual_monotone(unit):
    # a wider flat tip leaves less height: F decreases through the root
    grid = np.arange(0.3, 0.5 + 1e-12, 1e-3)
    F = np.array([shooting_residual(a, unit, 1e-3) for a in grid])
    assert np.all(np.diff(F) < 0)
    assert F[0] > 0 > F[-1]


def test_residual_domain(unit):
    with pytest.raises(ValidationError):
        shooting_residual(1.0, unit)


def test_bisection(bisection):
    assert bisection.converged
    assert abs(bisection.a - 0.350943) <= 1e-5
    assert abs(bisection.terminal_slope - 1.916801) <= 1e-4
    assert abs(bisection.iterations - 22) <= 3
    # endpoints + one residual per halving
    assert bisection.evaluations == bisection.iterations + 2
    a_new, a_old = bisection.history[-1][0], bisection.history[-2][0]
    assert terminated(a_new, a_old)


def test_bisection_no_bracket(unit):
    assert shooting_residual(0.6, unit, 1e-4) < 0 and shooting_residual(0.9, unit, 1e-4) < 0
    with pytest.raises(NoBracket):
        shoot_bisection(unit, 0.6, 0.9)


def test_secant(secant):
    assert secant.converged
    assert abs(secant.a - 0.350943) <= 1e-5
    assert abs(secant.terminal_slope - 1.916801) <= 1e-4
    assert abs(secant.iterations - 7) <= 2
    assert secant.evaluations == secant.iterations + 2
    assert terminated(secant.history[-1][0], secant.history[-2][0])


def test_secant_equal_seeds(unit):
    with pytest.raises(ValidationError):
        shoot_secant(unit, 0.4, 0.4)


def test_cross_method_agreement(bisection, secant):
    assert abs(bisection.a - secant.a) <= 1e-6
    assert abs(secant.a - CONVERGED_A) <= 2e-6
    assert abs(bisection.a - CONVERGED_A) <= 2e-6


def test_converged_residuals_small(unit, bisection, secant):
    for res in (bisection, secant):
        assert abs(shooting_residual(res.a, unit, 1e-4)) <= 1e-5


def test_termination_rule_is_relative():
    assert terminated(1.0, 1.0 + 0.9e-6)
    assert not terminated(1.0, 1.0 + 1.1e-6)
    assert terminated(100.0, 100.0 + 0.9e-4)
