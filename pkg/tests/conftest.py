from __future__ import annotations

import pytest

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def report(name: str, ok: bool, detail: str) -> None:
        line = f"{name}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES[name] = line
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[name])
