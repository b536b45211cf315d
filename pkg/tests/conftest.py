"""Shared pytest plumbing; also makes this directory importable for helpers.

The acceptance tests append one PASS/FAIL line per shipping criterion to
`acceptance_lines`; they are echoed as a terminal section after the run.
"""

from __future__ import annotations

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:  # type: ignore[no-untyped-def]
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
