"""
Tests Package
Contains all test modules and the unified test runner
"""

from .test_runner import SUITES, run_all_tests

__all__ = [
    'SUITES',
    'run_all_tests',
]
