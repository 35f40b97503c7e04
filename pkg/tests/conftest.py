import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}


def pytest_runtest_logreport(report):
    tags = [v for k, v in report.user_properties if k == "criterion"]
    if not tags:
        return
    number, title = tags[0].split("|", 1)
    ok = _criteria.get(int(number), (title, True))[1]
    if report.failed or (report.when == "call" and report.outcome != "passed"):
        ok = False
    _criteria[int(number)] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
