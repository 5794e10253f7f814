import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def square():
    from swarmform.pattern import formation
    return formation(4, 1.0)


def assert_points(actual, expected, tol=1e-12):
    np.testing.assert_allclose(np.asarray(actual, float), np.asarray(expected, float), atol=tol, rtol=0)


_session_start = []


def pytest_sessionstart(session):
    import time
    _session_start.append(time.perf_counter())


def pytest_terminal_summary(terminalreporter):
    import sys
    import time
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
    total = time.perf_counter() - _session_start[0]
    status = "PASS" if total < 60 else "FAIL"
    terminalreporter.write_line(f"[{status}] criterion 10: whole suite runtime ({total:.1f} s < 60 s)")
