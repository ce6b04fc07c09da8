"""
Encryption Test Module
Tests key sampling, encryption round trips, key-averaged ciphertexts, the
unclonability bound and the measure-resend baseline
"""

import numpy as np

from core.discretization import make_config
from core.errors import DomainError, ParameterError, ParityError
from features.encryption import (AverageMode, Ciphertext, QecmKey, SignDistIndex, avg_ciphertext,
                                 decrypt, delta_bound, delta_from_epsilon, delta_report, encrypt,
                                 key_unitary, plaintext_state, run_round_trips, sample_key,
                                 sample_keys, sign_dist_join, sign_dist_split,
                                 simulate_measure_resend, wrong_key_confidence)
from tests.common import assert_result, expect_error, new_result, run_check


def run_encryption_checks():
    """
    Test the one-bit encryption scheme.

    Returns:
        dict: Test result with status and details
    """
    result = new_result()
    result['output'].append("Testing encryption...")

    def sign_dist():
        assert sign_dist_split(3) == SignDistIndex(0, 3)
        assert sign_dist_split(-1) == SignDistIndex(1, 0)
        assert sign_dist_split(-4) == SignDistIndex(1, 3)
        for j in range(-4, 4):
            assert sign_dist_join(sign_dist_split(j)) == j
        expect_error(ParameterError, sign_dist_join, SignDistIndex(2, 0))
        expect_error(ParameterError, sign_dist_join, SignDistIndex(0, -1))

    def plaintexts():
        cfg = make_config(4)
        rho = plaintext_state(cfg, 0)
        weights = dict(zip(cfg.labels.tolist(), np.real(np.diag(rho))))
        assert weights == {-2: 0.0, -1: 0.0, 0: 0.5, 1: 0.5}, weights
        assert np.allclose(rho, np.diag(np.diag(rho)))
        complement = np.real(np.diag(plaintext_state(cfg, 1)))
        assert np.allclose(complement, 0.5 - np.real(np.diag(rho)))
        big = plaintext_state(make_config(8), 1)
        assert abs(np.trace(big) - 1.0) < 1e-12
        assert abs(np.real(np.trace(big @ big)) - 0.25) < 1e-12
        expect_error(ParityError, plaintext_state, make_config(5), 0)

    def key_unitaries():
        cfg = make_config(8)
        zero = QecmKey(ell=1, params=(0.0,) * 6, d=8)
        assert np.allclose(key_unitary(cfg, zero), np.eye(8), atol=1e-12)
        assert np.allclose(encrypt(cfg, 0, zero).matrix, plaintext_state(cfg, 0), atol=1e-12)

        key = sample_key(cfg, 2, seed=11)
        u = key_unitary(cfg, key)
        assert np.allclose(u.conj().T @ u, np.eye(8), atol=1e-10)
        first = QecmKey(ell=1, params=key.params[:6], d=8)
        second = QecmKey(ell=1, params=key.params[6:], d=8)
        assert np.allclose(u, key_unitary(cfg, second) @ key_unitary(cfg, first), atol=1e-12)

        c = encrypt(cfg, 1, key)
        assert np.allclose(c.matrix, u @ plaintext_state(cfg, 1) @ u.conj().T, atol=1e-12)
        spectrum = np.sort(np.linalg.eigvalsh(c.matrix))
        assert np.allclose(spectrum, [0.0] * 4 + [0.25] * 4, atol=1e-10), spectrum

    def round_trips():
        report = run_round_trips(make_config(8), 2, 20, seed=7)
        assert report.correct == report.total == 20, report.to_dict()
        assert report.min_confidence >= 1.0 - 1e-9
        assert report.ambiguous == 0
        assert report.delta_bound is not None

        experimental = run_round_trips(make_config(7), 1, 10, seed=1, experimental=True)
        assert experimental.correct == 10 and experimental.delta_bound is None
        expect_error(ParityError, run_round_trips, make_config(7), 1, 5, 0)

    def ciphertexts():
        cfg = make_config(8)
        key = sample_key(cfg, 2, seed=5)
        c = encrypt(cfg, 1, key)
        assert abs(np.trace(c.matrix) - 1.0) < 1e-12
        assert np.allclose(c.matrix, c.matrix.conj().T)
        assert decrypt(cfg, c, key).x_hat == 1
        assert c.to_dict()['matrix']['rows'] == 8

    def exact_average():
        cfg = make_config(8)
        for x in (0, 1):
            avg = avg_ciphertext(cfg, x, 1, AverageMode.EXACT)
            assert np.allclose(avg, np.eye(8) / 8, atol=1e-12), f"Average ciphertext of x={x} is not I/d"

    def monte_carlo_average():
        cfg = make_config(4)
        runs = [avg_ciphertext(cfg, 0, 1, AverageMode.MONTE_CARLO, n_samples=2_500, seed=2, threads=t)
                for t in (1, 3)]
        assert np.array_equal(runs[0], runs[1]), "Monte-Carlo average depends on the thread count"
        error = np.linalg.norm(runs[0] - np.eye(4) / 4)
        assert error <= 5.0 / np.sqrt(2_500), f"Monte-Carlo average error {error:.3e}"

    def delta():
        pref = 3.0 * np.log2(20.0) / 40.0
        assert abs(delta_bound(2 ** 20, 5) - pref * np.sqrt(5.0)) < 1e-12
        assert abs(delta_bound(2 ** 20, 8) - pref) < 1e-12
        expect_error(DomainError, delta_bound, 3, 5)
        expect_error(ParameterError, delta_bound, 16, 0)
        expect_error(DomainError, delta_from_epsilon, 16, -1.0)
        d, ell = 16, 3
        via_eps = delta_from_epsilon(d, d * float(d) ** -ell)
        assert abs(via_eps - delta_bound(d, ell)) <= 1e-12 * delta_bound(d, ell)
        report = delta_report(2 ** 20, 5)
        assert report['small_delta_regime'] and not delta_report(2 ** 20, 4)['small_delta_regime']

    def wrong_key():
        confidence = wrong_key_confidence(make_config(8), 2, 200, seed=0)
        assert 0.4 <= confidence <= 0.6, f"Wrong-key confidence {confidence}"

    def attack():
        cfg = make_config(8)
        report = simulate_measure_resend(cfg, 2, 10_000, seed=0)
        assert abs(report.win_probability - 0.6235) <= 1e-4, report.to_dict()
        plain = simulate_measure_resend(cfg, 0, 500, seed=0)
        assert plain.wins == plain.n_trials, "Unencrypted baseline must always win"
        threaded = simulate_measure_resend(cfg, 2, 10_000, seed=0, threads=4)
        assert threaded.wins == report.wins
        expect_error(ParameterError, simulate_measure_resend, cfg, -1, 10, 0)

    def ties():
        cfg = make_config(8)
        key = sample_key(cfg, 1, seed=3)
        flat = Ciphertext(matrix=np.eye(8, dtype=np.complex128) / 8, d=8, ell=1)
        decision = decrypt(cfg, flat, key)
        assert decision.ambiguous and decision.x_hat == 0
        assert abs(decision.confidence - 0.5) < 1e-12
        unnormalised = Ciphertext(matrix=np.eye(8, dtype=np.complex128), d=8, ell=1)
        expect_error(ParameterError, decrypt, cfg, unnormalised, key)

    def keys():
        expect_error(ParameterError, QecmKey, ell=1, params=(0.0,) * 5, d=8)
        expect_error(ParameterError, QecmKey, ell=1, params=(8.0,) + (0.0,) * 5, d=8)
        expect_error(ParameterError, QecmKey, ell=-1, params=(), d=8)
        expect_error(ParameterError, QecmKey, ell=1, params=(0.5,) * 6, d=7, experimental=True)
        cfg = make_config(8)
        one, two = sample_key(cfg, 1, seed=4), sample_key(cfg, 2, seed=4)
        expect_error(ParameterError, decrypt, cfg, encrypt(cfg, 0, one), two)
        expect_error(ParameterError, encrypt, make_config(4), 0, one)
        first = sample_keys(cfg, 2, 5, seed=9)
        assert first[:3] == sample_keys(cfg, 2, 3, seed=9), "Keys depend on the number drawn"
        assert len({k.params for k in first}) == 5

    def key_moments():
        # parameters are uniform on [0, d): mean d / 2, variance d^2 / 12
        cfg = make_config(8)
        params = np.array([k.params for k in sample_keys(cfg, 1, 10_000, seed=0)]).ravel()
        sigma = 8.0 / np.sqrt(12.0)
        assert abs(params.mean() - 4.0) <= 5.0 * sigma / np.sqrt(params.size), params.mean()
        assert abs(params.var() - sigma ** 2) <= 0.05 * sigma ** 2, params.var()
        assert params.min() >= 0.0 and params.max() < 8.0

    run_check(result, "Sign/distance split", sign_dist)
    run_check(result, "Plaintext states", plaintexts)
    run_check(result, "Key unitaries", key_unitaries)
    run_check(result, "Encrypt/decrypt round trips", round_trips)
    run_check(result, "Ciphertexts are states", ciphertexts)
    run_check(result, "Exact key average is I/d", exact_average)
    run_check(result, "Monte-Carlo key average", monte_carlo_average)
    run_check(result, "Unclonability bound", delta)
    run_check(result, "Wrong-key decryption is a coin flip", wrong_key)
    run_check(result, "Measure-resend baseline", attack)
    run_check(result, "Ties are flagged", ties)
    run_check(result, "Key validation", keys)
    run_check(result, "Key parameters are uniform", key_moments)

    return result


def test_encryption():
    assert_result(run_encryption_checks())


if __name__ == "__main__":
    result = run_encryption_checks()
    print("\n✓ Encryption test PASSED" if result['passed'] else "\n✗ Encryption test FAILED")
    for error in result['errors']:
        print(f"  ERROR: {error}")
