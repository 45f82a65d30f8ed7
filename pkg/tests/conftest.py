"""Prints the acceptance-criteria scoreboard after the test run."""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for mod in list(sys.modules.values()):
        path = getattr(mod, "__file__", None) or ""
        if path.endswith("test_acceptance.py"):
            results = getattr(mod, "RESULTS", [])
            if results:
                terminalreporter.section("acceptance criteria")
                for label, ok in results:
                    terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
            return
