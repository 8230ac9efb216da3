import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow suites")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        label = dict(report.user_properties).get("acceptance")
        if label:
            outcome = "skip" if report.skipped else ("PASS" if report.passed else "FAIL")
            _ACCEPTANCE.setdefault(label, []).append(outcome)


@pytest.fixture(autouse=True)
def _tag_acceptance(request):
    marker = request.node.get_closest_marker("acceptance")
    if marker:
        request.node.user_properties.append(("acceptance", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for label in sorted(_ACCEPTANCE):
        runs = [o for o in _ACCEPTANCE[label] if o != "skip"]
        status = "FAIL" if "FAIL" in runs else ("PASS" if runs else "skipped")
        terminalreporter.write_line(f"{label}: {status}")
