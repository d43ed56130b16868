import json
import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# derandomized so repeated runs draw the same examples
settings.register_profile("repro", derandomize=True, deadline=None, max_examples=40, print_blob=False)
settings.load_profile("repro")

# Set ANICK_RECORDS to a path to get one JSON line per test outcome and per
# value passed to the ``record`` fixture; two runs can then be diffed byte for byte.
RECORDS_PATH = os.environ.get("ANICK_RECORDS")
_records = []
_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.fixture
def record(request):
    def emit(**fields):
        _records.append({"test": request.node.nodeid, **fields})
    return emit


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _records.append({"test": item.nodeid, "outcome": rep.outcome})
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            # parametrized criteria pass only if every case passes
            prev = _criteria.get(number, (title, True))[1]
            _criteria[number] = (title, prev and rep.passed)


def pytest_sessionfinish(session, exitstatus):
    if RECORDS_PATH:
        with open(RECORDS_PATH, "w", encoding="utf-8") as fh:
            for rec in _records:
                fh.write(json.dumps(rec, sort_keys=True, default=str) + "\n")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(_criteria):
        title, passed = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")
