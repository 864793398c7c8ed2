import pytest

from orthokernel.measure import Chebyshev1, Legendre, Measure, Piecewise
from orthokernel.recurrence import stieltjes


@pytest.fixture(scope="session")
def legendre():
    return Measure(Legendre())


@pytest.fixture(scope="session")
def chebyshev():
    return Measure(Chebyshev1())


@pytest.fixture(scope="session")
def step():
    return Measure(Piecewise((0.0,), (1.0, 2.0)))


@pytest.fixture(scope="session")
def leg_table(legendre):
    return stieltjes(legendre, 400)


@pytest.fixture(scope="session")
def cheb_table(chebyshev):
    return stieltjes(chebyshev, 400)


@pytest.fixture(scope="session")
def step_table(step):
    return stieltjes(step, 400)


# acceptance criteria register a verdict here; the summary hook prints one line each
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
