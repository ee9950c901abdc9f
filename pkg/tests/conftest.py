from pathlib import Path

import pytest

from stylofluct.network import CoocNetwork

ROOT = Path(__file__).resolve().parents[1]
DESK = ROOT / "corpus" / "desk"
REFERENCE = ROOT / "corpus" / "reference"

# acceptance criteria record (name, passed, detail) here; printed at the end of the run
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def int_graph(n, edges) -> CoocNetwork:
    return CoocNetwork.from_edges([f"v{i}" for i in range(n)], [(f"v{u}", f"v{v}") for u, v in edges])


@pytest.fixture
def graph():
    return int_graph


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
