"""Test-session plugin: print one PASS/FAIL line per acceptance criterion."""

import re
import sys

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call":
        _results[num] = "PASS" if report.passed else "FAIL"
    elif report.failed:  # setup/teardown error
        _results[num] = "FAIL"
    elif report.when == "setup" and report.skipped:
        _results[num] = "FAIL (skipped)"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        terminalreporter.write_line(f"acceptance criterion {num:2d}: {_results[num]}")


sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))
