import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# filled by test_acceptance; one "PASS/FAIL criterion N: ..." line per check
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
