import pytest

from bvp_forge.problem import builtin_problem

_ACCEPTANCE = []


@pytest.fixture
def cube():
    return builtin_problem("cube")


@pytest.fixture
def cube_nd():
    return builtin_problem("cube-no-derivs")


@pytest.fixture
def linear():
    return builtin_problem("linear")


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
