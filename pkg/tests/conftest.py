"""Shared fixtures and reporting hooks for the test suite."""

ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # repeat the per-criterion verdict lines at the end of the run so they
    # are visible even when every test passes (pytest swallows stdout of
    # passing tests)
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
