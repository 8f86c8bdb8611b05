import os
from pathlib import Path

import pytest

from onion_tsp.geometry import Point
from onion_tsp.tsp_core import Instance

_ACCEPTANCE_LINES = []


def pts(coords):
    return [Point(i, x, y) for i, (x, y) in enumerate(coords)]


def inst(coords, name="t", metric="EUC_2D"):
    return Instance(name=name, points=pts(coords), metric=metric)


UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
GRID3 = [(x, y) for x in range(3) for y in range(3)]
NESTED_SQUARES = [(-2, -2), (2, -2), (2, 2), (-2, 2), (-1, -1), (1, -1), (1, 1), (-1, 1)]


@pytest.fixture
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion for the summary."""

    def record(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def att48_path():
    """User-supplied TSPLIB att48 file; never bundled."""
    candidates = [os.environ.get("ONION_TSP_ATT48"), Path(__file__).parent / "data" / "att48.tsp"]
    for c in candidates:
        if c and Path(c).is_file():
            return Path(c)
    return None
