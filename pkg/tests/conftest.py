from __future__ import annotations

import pytest

# criterion number -> (passed, seconds, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, secs, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.2f} s) {detail}")


@pytest.fixture
def acceptance():
    return ACCEPTANCE
