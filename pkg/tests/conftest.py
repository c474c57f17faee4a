import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            num, title = m.args
            _criteria.setdefault(num, {"title": title, "nodes": set(), "failed": False, "ran": 0})
            _criteria[num]["nodes"].add(item.nodeid)


def pytest_runtest_logreport(report):
    for entry in _criteria.values():
        if report.nodeid in entry["nodes"]:
            if report.failed:
                entry["failed"] = True
            if report.when == "call":
                entry["ran"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        e = _criteria[num]
        if e["failed"]:
            status = "FAIL"
        elif e["ran"] < len(e["nodes"]):
            status = "NOT RUN"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {e['title']}")


@pytest.fixture(scope="session")
def oracle_ring():
    from oracles import MatrixRing

    cache = {}

    def get(name, q):
        if (name, q) not in cache:
            cache[name, q] = MatrixRing(name, q)
        return cache[name, q]

    return get
