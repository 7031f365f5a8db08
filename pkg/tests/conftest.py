import numpy as np
import pytest

from echostats.ising import QuenchSpec, mode_data


@pytest.fixture
def md_exp():
    return mode_data(QuenchSpec(0.3, 1.4, 18))


@pytest.fixture
def md_batman():
    return mode_data(QuenchSpec(0.99, 1.01, 40))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance criteria report: one PASS/FAIL line per criterion in the terminal summary
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[mark.args[0]] = (mark.args[1], rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {title}")
