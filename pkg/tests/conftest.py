import pytest

_outcomes: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.addinivalue_line("markers", "slow: takes more than a few seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _outcomes.setdefault(number, {"title": title, "passed": 0, "failed": 0, "seconds": 0.0})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["failed" if report.outcome != "passed" or report.failed else "passed"] += 1
        entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        e = _outcomes[number]
        status = "PASS" if e["failed"] == 0 and e["passed"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {status}  {e['title']}  "
            f"({e['passed']} passed, {e['failed']} failed, {e['seconds']:.1f}s)"
        )
