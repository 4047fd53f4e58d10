import pytest

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def criterion_log():
    """Append ``(number, name, passed, detail)``; lines print in the terminal summary."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, name, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {num:>2}. {name}: {detail}")
