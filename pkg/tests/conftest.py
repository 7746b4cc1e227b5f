from __future__ import annotations

import pytest

from compactroute.graph import from_edges

ACCEPTANCE: list[tuple[int, bool, str]] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    """Log an acceptance outcome; the terminal summary prints one line each."""
    ACCEPTANCE.append((criterion, ok, detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(ACCEPTANCE, key=lambda x: x[0]):
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def k4():
    return from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def star5():
    return from_edges([(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture
def p3():
    return from_edges([(0, 1), (1, 2)])


@pytest.fixture
def p4():
    return from_edges([(0, 1), (1, 2), (2, 3)])
