"""
Test Runner Module
Runs every suite in order, prints a summary and keeps a copy under LOG/tests
"""

import os
from dataclasses import dataclass, field
from datetime import datetime

from core.config import LOG_FOLDER

from .test_acceptance import run_acceptance_checks
from .test_cli import run_cli_checks
from .test_config import run_config_checks
from .test_cvdisc import run_cvdisc_checks
from .test_design import run_design_checks
from .test_encryption import run_encryption_checks
from .test_opalg import run_opalg_checks
from .test_parallel import run_parallel_checks
from .test_twirl import run_twirl_checks

SUITES = [
    ("Configuration", "Configuration Validation", run_config_checks),
    ("Operator Algebra", "Norms, Structural Operators and Box Grid", run_opalg_checks),
    ("Streams", "Random Streams and Parallel Reduction", run_parallel_checks),
    ("Twirls", "Exact, Monte-Carlo and Discrete Twirls", run_twirl_checks),
    ("Design", "Design Map and Norm on K", run_design_checks),
    ("Discretisation", "CV State Discretisation", run_cvdisc_checks),
    ("Encryption", "One-Bit Encryption Scheme", run_encryption_checks),
    ("Acceptance", "Acceptance Criteria on Small Grids", run_acceptance_checks),
    ("Command Line", "Subcommands and Output Documents", run_cli_checks),
]

RULE = "=" * 80
THIN_RULE = "-" * 80


@dataclass
class SuiteResult:
    """Outcome of one suite: its checks' errors, warnings and output lines."""

    __test__ = False

    name: str
    ran: bool = False
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    output: list = field(default_factory=list)

    @property
    def passed(self):
        return self.ran and not self.errors

    @property
    def status(self):
        if not self.ran:
            return "NOT RUN"
        if self.errors:
            return "FAILED"
        return "PASSED (with warnings)" if self.warnings else "PASSED"


def run_all_tests(save_log=True, verbose=True):
    """
    Run every suite in SUITES.

    Args:
        save_log (bool): Also write the summary to LOG/tests
        verbose (bool): Print one line per suite as it finishes

    Returns:
        dict: results, all_passed, total_tests, passed, failed
    """
    print(RULE)
    print("RUNNING COMPREHENSIVE TEST SUITE")
    print(RULE)
    print()

    results = []
    for number, (name, title, suite) in enumerate(SUITES, start=1):
        print(f"Test {number}: {title}")
        print(THIN_RULE)
        results.append(run_test_with_capture(suite, name, verbose))
        print()

    print_test_summary(results)
    if save_log:
        save_test_log(results)

    passed = sum(1 for r in results if r.passed)
    return {
        'results': results,
        'all_passed': passed == len(results),
        'total_tests': len(results),
        'passed': passed,
        'failed': len(results) - passed,
    }


def run_test_with_capture(test_func, test_name, verbose=True):
    """
    Run one suite function; an exception counts as a single failed check.

    Returns:
        SuiteResult: The suite outcome
    """
    result = SuiteResult(test_name)
    try:
        outcome = test_func()
        result.ran = True
        if isinstance(outcome, dict):
            result.errors.extend(outcome.get('errors', []))
            result.warnings.extend(outcome.get('warnings', []))
            result.output.extend(outcome.get('output', []))
            if not outcome.get('passed', False) and not result.errors:
                result.errors.append("Suite reported failure without an error message")
    except Exception as e:
        result.ran = True
        result.errors.append(f"{type(e).__name__}: {e}")

    if verbose:
        if result.passed:
            print(f"✓ {test_name} test completed")
        else:
            print(f"✗ {test_name} test failed ({len(result.errors)} error(s))")
    return result


def summary_lines(results, with_output=False):
    """Summary text shared by the console and the saved log."""
    lines = []
    for result in results:
        symbol = "✓" if result.passed else "✗"
        lines.append(f"{symbol} {result.name}: {result.status}")
        if with_output:
            lines.extend(f"    {line}" for line in result.output)
        lines.extend(f"  ERROR: {e}" for e in result.errors)
        lines.extend(f"  WARNING: {w}" for w in result.warnings)

    passed = sum(1 for r in results if r.passed)
    failed = len(results) - passed
    lines += [
        "",
        THIN_RULE,
        f"Total Tests: {len(results)}",
        f"Passed: {passed}",
        f"Failed: {failed}",
        "",
        "✓ ALL TESTS PASSED!" if failed == 0 else "✗ SOME TESTS FAILED - Please review errors above",
    ]
    return lines


def print_test_summary(results):
    print(RULE)
    print("TEST SUMMARY")
    print(RULE)
    print()
    for line in summary_lines(results):
        print(line)
    print(RULE)


def save_test_log(results):
    """
    Write the summary, including each suite's output, to
    LOG/tests/test_results_<timestamp>.txt.

    Returns:
        str: Path of the log file
    """
    log_folder = os.path.join(os.getcwd(), LOG_FOLDER, 'tests')
    os.makedirs(log_folder, exist_ok=True)
    now = datetime.now()
    path = os.path.join(log_folder, f"test_results_{now.strftime('%Y%m%d_%H%M%S')}.txt")

    header = [RULE, "COMPREHENSIVE TEST RESULTS", RULE, f"Test Date: {now.strftime('%Y-%m-%d %H:%M:%S')}", ""]
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(header + summary_lines(results, with_output=True) + [RULE]) + "\n")

    print(f"\nTest log saved to: {path}")
    return path


if __name__ == "__main__":
    run_all_tests(save_log=True, verbose=True)
