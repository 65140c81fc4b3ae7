"""Run every property suite at a small size and print the summaries.

The sizes here keep the whole run to a few seconds; ``iitt test`` uses the
default budgets instead.
"""

import sys

from iitt.testkit import SUITES, run_suite

size = int(sys.argv[1]) if len(sys.argv) > 1 else 3
failed = 0
for name, suite in SUITES.items():
    report = run_suite(name, size=size)
    print(report.summary())
    print(f"    {suite.description}")
    failed += not report.ok
sys.exit(1 if failed else 0)
