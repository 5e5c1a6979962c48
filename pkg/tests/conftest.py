import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    n = props.get("criterion")
    if n is None:
        return
    entry = _CRITERIA.setdefault(n, {"title": props.get("criterion_title", ""), "passed": True, "failed": []})
    if report.outcome != "passed":
        entry["passed"] = False
        entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.fixture(autouse=True)
def _tag_criterion(request):
    marker = request.node.get_closest_marker("criterion")
    if marker is not None:
        request.node.user_properties.append(("criterion", marker.args[0]))
        request.node.user_properties.append(("criterion_title", marker.args[1]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "PASS" if e["passed"] else "FAIL"
        extra = "" if e["passed"] else f"  (failing: {', '.join(e['failed'])})"
        terminalreporter.write_line(f"criterion {n:2d} {status}  {e['title']}{extra}")
