import os

import pytest
from hypothesis import HealthCheck, settings

from fjshintani.algebra import SymbolicField
from fjshintani.lfactors import CharacterTuple
from fjshintani.rootdata import build_case

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "40")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def field11():
    return SymbolicField.standard(1, 1)


@pytest.fixture
def make_setup():
    """Factory returning (case, symbolic field, generic characters)."""

    def build(kind, n, m, nz=0):
        case = build_case(kind, n, m)
        fld = SymbolicField.standard(case.n_minus, case.m_minus, nz)
        return case, fld, CharacterTuple.generic(case, fld)

    return build


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Collects one summary line per acceptance criterion."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
