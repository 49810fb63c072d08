from collections import defaultdict

import pytest

from p2v.scoring import ConfusionMatrix
from p2v.transcripts import PhonemeInventory
from p2v.visemes import default_inventory, load_catalog

DEMO_LABELS = ["P1", "P2", "P3", "P4", "P5", "P6", "P7"]
# rows = true class, columns = estimated class
DEMO_ROWS = [
    [1, 0, 0, 0, 0, 0, 4],
    [0, 0, 0, 2, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 1],
    [0, 2, 1, 0, 2, 0, 0],
    [3, 0, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 4, 0],
    [1, 0, 3, 0, 0, 0, 1],
]


@pytest.fixture(scope="session")
def inventory():
    return default_inventory()


@pytest.fixture(scope="session")
def catalog(inventory):
    return load_catalog(inventory)


@pytest.fixture(scope="session")
def demo_inventory():
    return PhonemeInventory.from_pairs([(x, "c") for x in DEMO_LABELS])


@pytest.fixture(scope="session")
def demo_matrix():
    return ConfusionMatrix.from_rows(DEMO_LABELS, DEMO_ROWS)


_criteria = defaultdict(list)


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _criteria[marker.args[0]].append((item.name, call.excinfo is None))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        failed = [name for name, ok in results if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n}: {status} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
