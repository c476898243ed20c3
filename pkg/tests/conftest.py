"""Shared test plumbing: collects acceptance-criterion verdicts and
prints them as one line each in the terminal summary."""

import pytest

_criteria = {}


def _record(number: int, ok: bool, detail: str) -> None:
    _criteria[number] = (ok, detail)


@pytest.fixture
def criterion():
    """Callable (number, ok, detail) recording one acceptance verdict."""
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        ok, detail = _criteria[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"CRITERION {number}: {verdict} - {detail}")
