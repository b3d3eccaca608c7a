import time

import pytest

SUITE_BUDGET_S = 60.0

_criteria: dict[int, list[tuple[str, str]]] = {}
_started = 0.0


def pytest_sessionstart(session):
    global _started
    _started = time.perf_counter()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = getattr(report, "_criterion", None)
    if number is None:
        return
    _criteria.setdefault(number, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report._criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _started
    tr = terminalreporter
    if _criteria:
        tr.section("acceptance criteria")
        for number in sorted(_criteria):
            results = _criteria[number]
            ok = all(outcome == "passed" for _, outcome in results)
            tr.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({len(results)} check(s))")
    collected = tr._session.testscollected if getattr(tr, "_session", None) else 0
    full_run = not config.getoption("keyword") and not config.getoption("markexpr") and collected > 100
    if full_run:
        ok = elapsed < SUITE_BUDGET_S
        tr.write_line(
            f"criterion 9: {'PASS' if ok else 'FAIL'} (full suite {elapsed:.1f} s, budget {SUITE_BUDGET_S:.0f} s)"
        )


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _started
    if session.testscollected > 100 and elapsed >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1
