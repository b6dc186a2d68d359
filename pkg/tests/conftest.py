import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def _report(criterion: str, passed: bool, detail: str) -> bool:
        line = f"{criterion:<4} {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
