import pytest

from cubix.cubics import BinaryCubic
from cubix.fields import parse_field


@pytest.fixture(scope="session")
def Q():
    return parse_field("rat")


@pytest.fixture(scope="session")
def F5():
    return parse_field("fp:5")


@pytest.fixture(scope="session")
def F7():
    return parse_field("fp:7")


def raw(F, *coeffs):
    """Cubic from raw coefficients p0 x^3 + p1 x^2 y + p2 x y^2 + p3 y^3."""
    return BinaryCubic.from_raw(F, [F(c) for c in coeffs])


def abcd(F, *coeffs):
    return BinaryCubic.from_abcd(F, [F(c) for c in coeffs])


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_ACCEPTANCE, key=lambda t: int(t[0].split("_")[2])):
        terminalreporter.write_line(f"{name}: {outcome}")
