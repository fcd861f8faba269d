import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance pass/fail lines after the run, outside capture."""
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "EMITTED", None) if module else None
    if lines:
        terminalreporter.section("acceptance checks")
        for line in lines:
            terminalreporter.write_line(line)
