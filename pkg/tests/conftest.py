import pytest

from gorcontract.cover import build_cover_graph
from gorcontract.io import load_fixture

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def fixture():
    """Load a bundled example: returns (T, datum, differential)."""
    return load_fixture


@pytest.fixture
def cover_of():
    return build_cover_graph


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
