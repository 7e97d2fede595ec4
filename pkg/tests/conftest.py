import pytest

from pobshare.access import AccessStructure

ACCEPTANCE_LINES = []


@pytest.fixture
def example1():
    # minimal authorized sets {1,2} and {3,4}
    return AccessStructure.from_sets(["P1", "P2", "P3", "P4"], [[0, 1], [2, 3]])


@pytest.fixture
def record():
    def _record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else ""))
        assert ok, f"{label}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
