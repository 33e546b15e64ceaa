import pytest

_LINES = []


@pytest.fixture
def criterion_log():
    """Record a one-line verdict; the lines are repeated in the terminal summary."""
    def log(line: str) -> None:
        _LINES.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
