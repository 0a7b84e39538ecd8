import pytest

_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance verdict line; printed again in the terminal summary."""

    def add(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        print(line)
        _LINES.append(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for line in _LINES:
            terminalreporter.write_line(line)
