"""
Twirl Test Module
Tests boxed unitaries, exact and Monte-Carlo twirls and the integer-parameter
(prime d) twirl
"""

import numpy as np

from core.discretization import make_config
from core.errors import ParameterError, ParityError, PrimalityError
from core.opalg import identity_operator, swap_operator
from features.design import apply_R
from features.twirl import (Basis, BoxedUnitaryParams, ParameterMode, TwirlFamily, boxed_unitary,
                            discrete_cross_check, discrete_double_twirl, exact_double_twirl,
                            exact_single_twirl, mc_double_twirl, parse_family)
from tests.common import assert_result, expect_error, new_result, random_matrix, run_check


def _unit(n, r, c):
    m = np.zeros((n, n), dtype=np.complex128)
    m[r, c] = 1.0
    return m


def run_twirl_checks():
    """
    Test the boxed-unitary twirls.

    Returns:
        dict: Test result with status and details
    """
    result = new_result()
    result['output'].append("Testing twirls...")

    def unitaries():
        cfg = make_config(4)
        for basis in (Basis.Q, Basis.P):
            u = boxed_unitary(cfg, BoxedUnitaryParams(basis, 1.5, 2.25))
            assert np.allclose(u.conj().T @ u, np.eye(cfg.d)), f"{basis} unitary is not unitary"
        q = boxed_unitary(cfg, BoxedUnitaryParams('q', 1.0, 0.0))
        assert np.allclose(np.diag(q), np.exp(2j * np.pi * cfg.labels / cfg.d))
        expect_error(ParameterError, boxed_unitary, cfg, BoxedUnitaryParams(Basis.Q, 4.0, 0.0))
        expect_error(ParameterError, boxed_unitary, cfg, BoxedUnitaryParams(Basis.Q, 0.0, -0.5))

    def integer_mode():
        integer = ParameterMode.INTEGER_MOD_D
        expect_error(ParityError, boxed_unitary, make_config(4), BoxedUnitaryParams(Basis.Q, 1, 1, integer))
        expect_error(PrimalityError, boxed_unitary, make_config(9), BoxedUnitaryParams(Basis.Q, 1, 1, integer))
        cfg = make_config(5)
        u = boxed_unitary(cfg, BoxedUnitaryParams(Basis.P, -2, 1, integer))
        assert np.allclose(u.conj().T @ u, np.eye(5))
        expect_error(ParameterError, boxed_unitary, cfg, BoxedUnitaryParams(Basis.Q, 3, 0, integer))

    def single_twirl():
        cfg = make_config(6)
        a = random_matrix(11, cfg.d)
        rho = a @ a.conj().T
        rho = rho / np.trace(rho)
        dephased = exact_single_twirl(cfg, Basis.Q, rho)
        assert np.allclose(dephased, np.diag(np.diag(rho)))
        mixed = exact_single_twirl(cfg, Basis.P, dephased)
        assert np.allclose(mixed, np.eye(cfg.d) / cfg.d), "Q then P twirl is not I/d"

    def double_twirl_exact():
        for d in (3, 4):
            cfg = make_config(d)
            i_op, f_op = identity_operator(d), swap_operator(d)
            x = random_matrix(d, d * d)
            for basis in (Basis.Q, Basis.P):
                assert np.allclose(exact_double_twirl(cfg, basis, i_op), i_op)
                assert np.allclose(exact_double_twirl(cfg, basis, f_op), f_op)
                once = exact_double_twirl(cfg, basis, x)
                assert np.allclose(exact_double_twirl(cfg, basis, once), once), f"{basis} twirl not idempotent"

    def monte_carlo():
        cfg = make_config(3)
        x = random_matrix(5, 9)
        n = 20_000
        limit = 5.0 * np.linalg.norm(x) / np.sqrt(n)
        q_only = mc_double_twirl(cfg, TwirlFamily.Q_ONLY, x, n, seed=1)
        error = np.linalg.norm(q_only - exact_double_twirl(cfg, Basis.Q, x))
        assert error <= limit, f"Q-only error {error:.3e} > {limit:.3e}"
        p_only = mc_double_twirl(cfg, 'p', x, n, seed=2)
        error = np.linalg.norm(p_only - exact_double_twirl(cfg, Basis.P, x))
        assert error <= limit, f"P-only error {error:.3e} > {limit:.3e}"
        sandwich = mc_double_twirl(cfg, TwirlFamily.SANDWICH, x, n, seed=3)
        error = np.linalg.norm(sandwich - apply_R(cfg, x))
        assert error <= limit, f"Sandwich error {error:.3e} > {limit:.3e}"

    def thread_determinism():
        cfg = make_config(3)
        x = random_matrix(6, 9)
        serial = mc_double_twirl(cfg, TwirlFamily.SANDWICH, x, 450, 4, threads=1, chunk_size=100)
        threaded = mc_double_twirl(cfg, TwirlFamily.SANDWICH, x, 450, 4, threads=3, chunk_size=100)
        assert np.array_equal(serial, threaded), "Sandwich twirl depends on the thread count"
        again = mc_double_twirl(cfg, TwirlFamily.Q_ONLY, x, 450, 4, threads=2, chunk_size=100)
        assert np.array_equal(again, mc_double_twirl(cfg, TwirlFamily.Q_ONLY, x, 450, 4, threads=1,
                                                     chunk_size=100))

    def discrete_prime():
        cfg = make_config(5)
        x = random_matrix(7, 25)
        for basis in (Basis.Q, Basis.P):
            diff = discrete_double_twirl(cfg, basis, x) - exact_double_twirl(cfg, basis, x)
            assert np.max(np.abs(diff)) <= 1e-12, f"{basis} discrete twirl differs from continuous"
            assert discrete_cross_check(cfg, basis, x) <= 1e-10
        expect_error(ParameterError, discrete_cross_check, make_config(11), Basis.Q, np.eye(121))

    def composite_counterexample():
        cfg = make_config(6)
        row = cfg.position(0) * 6 + cfg.position(-1)
        col = cfg.position(2) * 6 + cfg.position(-3)
        x = _unit(36, row, col)
        forced = discrete_double_twirl(cfg, Basis.Q, x, force=True)
        assert abs(forced[row, col] - 1.0) < 1e-12, "Mod-6 coincidence not kept"
        assert exact_double_twirl(cfg, Basis.Q, x)[row, col] == 0.0
        assert discrete_cross_check(cfg, Basis.Q, x, force=True) <= 1e-10
        expect_error(ParityError, discrete_double_twirl, cfg, Basis.Q, x)

    def families():
        assert parse_family('sandwich') is TwirlFamily.SANDWICH
        assert parse_family('q_only') is TwirlFamily.Q_ONLY
        expect_error(ParameterError, parse_family, 'haar')

    run_check(result, "Boxed unitaries", unitaries)
    run_check(result, "Integer-parameter mode guards", integer_mode)
    run_check(result, "Single twirls Q then P give I/d", single_twirl)
    run_check(result, "Exact two-fold twirls", double_twirl_exact)
    run_check(result, "Monte-Carlo twirls converge", monte_carlo)
    run_check(result, "Monte-Carlo twirl independent of threads", thread_determinism)
    run_check(result, "Prime-d discrete twirl", discrete_prime)
    run_check(result, "d=6 counterexample", composite_counterexample)
    run_check(result, "Family names", families)

    return result


def test_twirl():
    assert_result(run_twirl_checks())


if __name__ == "__main__":
    result = run_twirl_checks()
    print("\n✓ Twirl test PASSED" if result['passed'] else "\n✗ Twirl test FAILED")
    for error in result['errors']:
        print(f"  ERROR: {error}")
