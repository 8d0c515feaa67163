import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import ACCEPTANCE  # noqa: E402

from kinvd.polygon import validate_polygon  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


@pytest.fixture
def square():
    return validate_polygon([(1, 1), (1, -1), (-1, -1), (-1, 1)], require_distinct_orientations=False)


@pytest.fixture
def scenario_dir():
    return SCENARIOS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")
