from fractions import Fraction
import time

import pytest

from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(bound: int = 20, denom: int = 6):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, denom))


def points2(bound: int = 20, denom: int = 6):
    return st.tuples(rationals(bound, denom), rationals(bound, denom))


# acceptance report: one line per criterion in the terminal summary

_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    status = "PASS" if rep.passed and rep.when == "call" else "FAIL"
    prev = _ACCEPTANCE.get(number)
    if prev is None or prev[1] == "PASS":
        _ACCEPTANCE[number] = (title, status, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, seconds = _ACCEPTANCE[number]
        tr.write_line(f"{status} criterion {number:>2}: {title} ({seconds:.2f} s)")
    tr.write_line(f"total session time {time.perf_counter() - _START:.1f} s")


_START = time.perf_counter()
