from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}   # criterion id -> title
_NODES = {}      # test node id -> criterion id
_OUTCOMES = {}   # criterion id -> list of outcomes


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            cid, title = mark.args
            _CRITERIA.setdefault(cid, title)
            _NODES[item.nodeid] = cid


def pytest_runtest_logreport(report):
    cid = _NODES.get(report.nodeid)
    if cid is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _OUTCOMES.setdefault(cid, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c[2:])):
        runs = _OUTCOMES.get(cid, [])
        if not runs:
            status = "NOT RUN"
        elif all(o == "passed" for o in runs):
            status = "PASS"
        else:
            status = "FAIL"
        tr.write_line(f"{cid:<5} {status:<7} {_CRITERIA[cid]}")
