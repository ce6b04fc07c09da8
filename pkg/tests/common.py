"""
Shared helpers for the test modules: the result dict collected by every
test and a wrapper that records one named check into it.
"""

import numpy as np


def new_result():
    return {
        'passed': True,
        'errors': [],
        'warnings': [],
        'output': []
    }


def run_check(result, label, check):
    """
    Run one check; AssertionErrors and unexpected exceptions mark the result failed.
    """
    try:
        check()
        result['output'].append(f"✓ {label}")
    except AssertionError as e:
        result['passed'] = False
        result['errors'].append(f"{label}: {e}")
    except Exception as e:
        result['passed'] = False
        result['errors'].append(f"{label}: {type(e).__name__}: {e}")


def expect_error(error_type, fn, *args, **kwargs):
    """Assert that fn(*args, **kwargs) raises error_type."""
    try:
        fn(*args, **kwargs)
    except error_type:
        return
    raise AssertionError(f"{getattr(fn, '__name__', fn)} did not raise {error_type.__name__}")


def random_matrix(seed, n, m=None):
    """Complex Gaussian n x m matrix from a fixed seed."""
    rng = np.random.default_rng(seed)
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def assert_result(result):
    assert result['passed'], "; ".join(result['errors'])
