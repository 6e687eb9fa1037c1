import pytest

from nosecone.newton_model import NoseConeGeometry
from nosecone.shooting import shoot_bisection, shoot_secant
from nosecone.transform_method import solve_newton_fbp

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def unit():
    return NoseConeGeometry(1.0, 1.0)


@pytest.fixture(scope="session")
def table2(unit):
    """The headline runs: r = h = 1, a* = 0.5, step 1e-3, one per method."""
    return {m: solve_newton_fbp(unit, 0.5, 1e-3, m) for m in ("RK2", "RK4", "RK6")}


@pytest.fixture(scope="session")
def refined(unit):
    return solve_newton_fbp(unit, 0.5, 1e-3, "RK4", locator="refine")


@pytest.fixture(scope="session")
def bisection(unit):
    return shoot_bisection(unit, 0.3, 0.5)


@pytest.fixture(scope="session")
def secant(unit):
    return shoot_secant(unit, 0.5, 0.3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
