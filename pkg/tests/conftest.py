"""Shared pytest hooks.

Collects the acceptance verdict lines emitted while the suite runs and
prints them in the terminal summary, where output capture cannot swallow
them.
"""

acceptance_verdicts = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_verdicts:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_verdicts:
            terminalreporter.write_line(line)
