import sys
import time
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SUITE_BUDGET_S = 60.0
ACCEPTANCE_LINES: dict[str, str] = {}
_START = [0.0]


def pytest_sessionstart(session):
    _START[0] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _START[0]
    # the runtime half of criterion 9 only means something for a full run
    full = session.testscollected > 200
    if ACCEPTANCE_LINES and full:
        ok = elapsed < SUITE_BUDGET_S
        ACCEPTANCE_LINES["9b"] = (f"criterion 9 (suite runtime): {'PASS' if ok else 'FAIL'} "
                                  f"{elapsed:.1f} s < {SUITE_BUDGET_S:.0f} s")
        if not ok:
            session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
