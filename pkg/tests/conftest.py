import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on ``ok`` itself."""
    def record(name, ok, detail):
        _CRITERIA.append((bool(ok), name, detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for ok, name, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
