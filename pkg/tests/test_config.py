"""
Configuration Test Module
Tests configuration loading, defaults and the thread-count override
"""

import json
import os

from core.config import (BRUTE_FORCE_MAX_D, DEFAULT_METHOD, DELTA_LOG_BASE, GAUSS_NODES,
                         LOG_FOLDER, MC_CHUNK_SIZE, OUTPUT_FOLDER, THREADS_ENV_VAR,
                         TIE_TOLERANCE, config_snapshot, get_thread_count, print_config)
from tests.common import assert_result, new_result, run_check


def run_config_checks():
    """
    Test configuration loading and validation.

    Returns:
        dict: Test result with status and details
    """
    result = new_result()
    result['output'].append("Testing Configuration Loading...")

    def paths():
        assert OUTPUT_FOLDER, "OUTPUT_FOLDER is not configured"
        assert LOG_FOLDER, "LOG_FOLDER is not configured"

    def numerics():
        assert 0 < TIE_TOLERANCE < 1e-6, f"Unexpected tie tolerance {TIE_TOLERANCE}"
        assert GAUSS_NODES >= 4, "Too few Gauss nodes per box"
        assert MC_CHUNK_SIZE >= 1, "Chunk size must be positive"
        assert BRUTE_FORCE_MAX_D == 6, f"Brute-force limit is {BRUTE_FORCE_MAX_D}"
        assert DEFAULT_METHOD in ('brute', 'structured')
        assert DELTA_LOG_BASE == 2.0

    def thread_override():
        saved = os.environ.get(THREADS_ENV_VAR)
        try:
            os.environ[THREADS_ENV_VAR] = "3"
            assert get_thread_count() == 3
            os.environ[THREADS_ENV_VAR] = "not-a-number"
            assert get_thread_count() == 1
            os.environ[THREADS_ENV_VAR] = "0"
            assert get_thread_count() == 1
        finally:
            if saved is None:
                os.environ.pop(THREADS_ENV_VAR, None)
            else:
                os.environ[THREADS_ENV_VAR] = saved

    def snapshot():
        snap = config_snapshot()
        for section in ('paths', 'numerics', 'discretization', 'design', 'monte_carlo', 'encryption', 'output'):
            assert section in snap, f"Missing section {section}"
        json.dumps(snap, allow_nan=False)

    run_check(result, "Paths are configured", paths)
    run_check(result, "Numeric settings are sane", numerics)
    run_check(result, f"{THREADS_ENV_VAR} overrides the thread count", thread_override)
    run_check(result, "Configuration snapshot is JSON-serialisable", snapshot)

    print("\nCurrent Configuration:")
    print_config()

    return result


def test_config():
    assert_result(run_config_checks())


if __name__ == "__main__":
    result = run_config_checks()

    if result['passed']:
        print("\n✓ Configuration test PASSED")
    else:
        print("\n✗ Configuration test FAILED")
        for error in result['errors']:
            print(f"  ERROR: {error}")
