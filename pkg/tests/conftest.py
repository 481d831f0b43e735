import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from soplab.qlinalg import FSVector, a, b  # noqa: E402

small_q = st.fractions(min_value=-8, max_value=8, max_denominator=6)


@st.composite
def ab_vectors(draw, max_index=6, max_terms=5):
    v = FSVector()
    for _ in range(draw(st.integers(0, max_terms))):
        kind = draw(st.sampled_from((a, b)))
        v = v + kind(draw(st.integers(0, max_index)), draw(small_q))
    return v


def F(x):
    return Fraction(x)


# --- acceptance reporting -------------------------------------------------------

import pytest  # noqa: E402

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, text = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[number] = (text, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, outcome, duration = _CRITERIA[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {text}  ({duration:.1f}s)")
