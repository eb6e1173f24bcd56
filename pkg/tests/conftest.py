"""Collects one verdict line per acceptance criterion and prints them at the end."""
import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        _VERDICTS.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: s.split(":")[0]):
            terminalreporter.write_line(line)
