import pytest

from codex_lcc.codex import hermitian_codex, rational_codex
from codex_lcc.mfp import build_mfp, interleave


@pytest.fixture(scope="session")
def gf7_codex():
    return rational_codex(7, 1, 1, 2, 3)


@pytest.fixture(scope="session")
def gf5_codex():
    return rational_codex(5, 1, 1, 2, 3)


@pytest.fixture(scope="session")
def herm3_codex():
    return hermitian_codex(3, 1, 1, 2, 15)


@pytest.fixture(scope="session")
def herm4_interleaved():
    return interleave(hermitian_codex(4, 1, 4, 2, 33), build_mfp(2, 4))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
