import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from monoidal_geometry import FinVect, PrimeField, QQ, algebra, product_monoid

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

F2 = PrimeField(2)
F3 = PrimeField(3)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def qv():
    return FinVect(QQ)


@pytest.fixture(scope="session")
def q(qv):
    return algebra(qv, [[[1]]], [1], name="Q")


@pytest.fixture(scope="session")
def qxq(q):
    return product_monoid(q, q, name="QxQ")


@pytest.fixture(scope="session")
def qxqxq(q):
    return product_monoid(q, q, q, name="QxQxQ")


@pytest.fixture(scope="session")
def dual(qv):
    """Q[x]/(x^2) on the basis 1, eps."""
    return algebra(qv, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]], [1, 0], name="Q[x]/(x^2)")


@pytest.fixture(scope="session")
def sqrt2(qv):
    """Q[x]/(x^2 - 2) on the basis 1, x."""
    return algebra(qv, [[[1, 0], [0, 1]], [[0, 1], [2, 0]]], [1, 0], name="Q(sqrt2)")


@pytest.fixture(scope="session")
def f4():
    return algebra(FinVect(F2), [[[1, 0], [0, 1]], [[0, 1], [1, 1]]], [1, 0], name="F4")


@pytest.fixture(scope="session")
def f2():
    return algebra(FinVect(F2), [[[1]]], [1], name="F2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
