"""Shared fixtures and the per-criterion summary printed after the acceptance run."""

from __future__ import annotations

import pytest

_OUTCOMES: dict[int, tuple[str, str]] = {}
_NOTES: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    number, title = mark.args
    prev = _OUTCOMES.get(number, ("PASS", title))[0]
    status = "FAIL" if rep.failed or prev == "FAIL" else "PASS"
    _OUTCOMES[number] = (status, title)


@pytest.fixture(scope="session")
def note():
    """Record an informational line for the acceptance summary."""
    return _NOTES.append


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        status, title = _OUTCOMES[number]
        tr.write_line(f"[{status}] criterion {number:2d}: {title}")
    for line in _NOTES:
        tr.write_line(f"  note: {line}")
