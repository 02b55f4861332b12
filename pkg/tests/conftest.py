import pytest

from phifern.phimod import FilteredPhiModule

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion(capsys):
    """Print (and remember) one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"CRITERION {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


def module(prime, eigenvalues, weights, columns):
    return FilteredPhiModule.build(prime, eigenvalues, weights, columns)


@pytest.fixture
def running():
    """p = 5, eigenvalues (1, 25), weights (0, 2), Fil^2 = span(1, 1)."""
    return module(5, [1, 25], [0, 2], [[1, 0], [1, 1]])


@pytest.fixture
def eigenline():
    return module(5, [1, 25], [0, 2], [[0, 1], [1, 0]])
