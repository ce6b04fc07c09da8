"""
Runs every test suite and exits non-zero when any fails
"""

import sys

from tests.test_runner import RULE, run_all_tests

if __name__ == "__main__":
    results = run_all_tests(save_log=True, verbose=True)

    print()
    if results['all_passed']:
        print("✓ ALL TESTS PASSED")
        print("Run 'python main.py report-all' for the full acceptance report.")
    else:
        print(f"✗ {results['failed']} of {results['total_tests']} suites failed; see LOG/tests/ for details.")
    print(RULE)

    sys.exit(0 if results['all_passed'] else 1)
