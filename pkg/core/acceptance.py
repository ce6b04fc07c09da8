"""
Acceptance Module
Desk-scale acceptance suite: each check measures a value, compares it with
its bound and returns one row of the report-all table.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.discretization import make_config
from core.opalg import decompose_ak, identity_operator, swap_operator, swap_trace
from features.cvdisc import discretization_check
from features.design import (NormMethod, apply_R, apply_R_iterated, apply_R_power,
                             norm_on_K)
from features.encryption import (AverageMode, avg_ciphertext, delta_bound,
                                 run_round_trips, simulate_measure_resend)
from features.twirl import (Basis, TwirlFamily, discrete_double_twirl,
                            exact_double_twirl, mc_double_twirl)
from features.wavefunctions import coherent, fock, vacuum
from utils.formatters import format_pass_fail
from utils.logger import get_logger

logger = get_logger(module_name="acceptance")

RESIDUAL_TOL = 1e-10


@dataclass
class CriterionResult:
    """One row of the acceptance table."""

    criterion: int
    name: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {
            'criterion': self.criterion,
            'name': self.name,
            'measured': self.measured,
            'threshold': self.threshold,
            'passed': bool(self.passed),
            'detail': self.detail,
        }


def random_matrix(rng, n, hermitian=False):
    """Standard complex Gaussian n x n matrix."""
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T) if hermitian else m


def random_k_element(rng, d):
    return decompose_ak(random_matrix(rng, d * d), d).k_part


def _matrix_unit(n, r, c):
    unit = np.zeros((n, n), dtype=np.complex128)
    unit[r, c] = 1.0
    return unit


# ============================================================================
# Criteria
# ============================================================================

def check_design_norms(dims=(2, 3, 4, 5, 6), ells=(1, 2, 3)):
    """Norm of R^ell on K against d^-ell, both methods agreeing."""
    worst_margin, worst_residual, rows = -np.inf, 0.0, []
    for d in dims:
        cfg = make_config(d)
        for ell in ells:
            report = norm_on_K(cfg, ell, NormMethod.BRUTE_FORCE)
            worst_margin = max(worst_margin, report.norm_2to2_on_K - report.bound)
            worst_residual = max(worst_residual, report.residual_vs_oracle)
            rows.append(report.to_dict())
    passed = worst_margin <= RESIDUAL_TOL and worst_residual <= 1e-9
    return CriterionResult(1, "design norm on K <= d^-ell", worst_margin, RESIDUAL_TOL, passed,
                           f"max brute/structured residual {worst_residual:.2e}"), rows


def check_closed_form(rng, dims=(3, 4), n_random=50, max_ell=4):
    """apply_R against the Q o P o Q composition; apply_R_power against iteration."""
    unit_error = 0.0
    for d in dims:
        cfg = make_config(d)
        n = d * d
        for r in range(n):
            for c in range(n):
                x = _matrix_unit(n, r, c)
                composed = exact_double_twirl(cfg, Basis.Q, x)
                composed = exact_double_twirl(cfg, Basis.P, composed)
                composed = exact_double_twirl(cfg, Basis.Q, composed)
                unit_error = max(unit_error, float(np.max(np.abs(apply_R(cfg, x) - composed))))

    cfg = make_config(4)
    power_error = 0.0
    for _ in range(n_random):
        x = random_k_element(rng, cfg.d)
        scale = float(np.linalg.norm(x))
        for ell in range(1, max_ell + 1):
            diff = apply_R_power(cfg, x, ell) - apply_R_iterated(cfg, x, ell)
            power_error = max(power_error, float(np.linalg.norm(diff)) / scale)

    passed = unit_error <= 1e-10 and power_error <= 1e-12
    return CriterionResult(2, "closed-form R vs twirl composition", unit_error, 1e-10, passed,
                           f"R^ell vs iteration relative error {power_error:.2e}")


def check_invariance(rng, dims=(2, 3, 4, 5, 6), n_random=100):
    """R(I) = I, R(F) = F; trace and swap trace preserved."""
    fixed_error = 0.0
    for d in dims:
        cfg = make_config(d)
        for op in (identity_operator(d), swap_operator(d)):
            fixed_error = max(fixed_error, float(np.max(np.abs(apply_R(cfg, op) - op))))

    trace_error = 0.0
    for d in (3, 4, 5):
        cfg = make_config(d)
        for _ in range(n_random):
            x = random_matrix(rng, d * d)
            y = apply_R(cfg, x)
            trace_error = max(trace_error, abs(np.trace(y) - np.trace(x)),
                              abs(swap_trace(y, d) - swap_trace(x, d)))

    passed = fixed_error <= 1e-12 and trace_error <= 1e-10
    return CriterionResult(3, "R fixes I and F, preserves Tr and Tr F", fixed_error, 1e-12, passed,
                           f"trace / swap-trace error {trace_error:.2e}")


def check_monte_carlo(rng, d=4, n_samples=100_000, seeds=10, threads=None):
    """QOnly Monte-Carlo twirl within 5 ||X|| / sqrt(n) of the exact twirl; convergence slope."""
    cfg = make_config(d)
    x = random_matrix(rng, d * d)
    exact = exact_double_twirl(cfg, Basis.Q, x)
    limit = 5.0 * float(np.linalg.norm(x)) / np.sqrt(n_samples)

    good = 0
    for seed in range(seeds):
        mc = mc_double_twirl(cfg, TwirlFamily.Q_ONLY, x, n_samples, seed, threads)
        good += int(float(np.linalg.norm(mc - exact)) <= limit)

    sizes = np.array([100, 1_000, 10_000, 100_000])
    errors = []
    for n in sizes:
        errs = [float(np.linalg.norm(mc_double_twirl(cfg, TwirlFamily.Q_ONLY, x, int(n), s, threads) - exact))
                for s in range(seeds)]
        errors.append(np.mean(errs))
    slope = float(np.polyfit(np.log10(sizes), np.log10(errors), 1)[0])

    passed = good >= seeds - 1 and abs(slope + 0.5) <= 0.15
    return CriterionResult(4, "Monte-Carlo twirl converges to exact", slope, -0.5, passed,
                           f"{good}/{seeds} seeds within 5||X||/sqrt(n)")


def check_discrete_variant(primes=(3, 5, 7)):
    """Integer-parameter twirl equals the continuous one for prime d; d = 6 counterexample."""
    worst = 0.0
    for d in primes:
        cfg = make_config(d)
        n = d * d
        for r in range(n):
            for c in range(n):
                x = _matrix_unit(n, r, c)
                diff = discrete_double_twirl(cfg, Basis.Q, x) - exact_double_twirl(cfg, Basis.Q, x)
                worst = max(worst, float(np.max(np.abs(diff))))

    cfg6 = make_config(6)
    row = cfg6.position(0) * 6 + cfg6.position(-1)
    col = cfg6.position(2) * 6 + cfg6.position(-3)
    x = _matrix_unit(36, row, col)
    coefficient = discrete_double_twirl(cfg6, Basis.Q, x, force=True)[row, col]
    continuous = exact_double_twirl(cfg6, Basis.Q, x)[row, col]

    passed = worst <= 1e-12 and abs(coefficient - 1.0) <= 1e-12 and abs(continuous) == 0.0
    return CriterionResult(5, "prime-d discrete twirl equals continuous", worst, 1e-12, passed,
                           f"d=6 counterexample coefficient {coefficient.real:.3f}")


def check_discretization(dims=(32, 64, 128)):
    """Discretisation error against the trace-distance bound."""
    records, ok, worst_integration, worst_surrogate = [], True, 0.0, 0.0
    for d in dims:
        cfg = make_config(d)
        for psi in (vacuum(), fock(1), fock(2), coherent(1.0)):
            record = discretization_check(cfg, psi)
            records.append(record.to_dict())
            ok = ok and record.passed
            worst_integration = max(worst_integration, record.integration_drift)
            worst_surrogate = max(worst_surrogate, record.surrogate_drift)
    worst_ratio = max(r['measured_distance'] / r['bound'] for r in records)
    passed = ok and max(worst_integration, worst_surrogate) <= 1e-6
    return CriterionResult(6, "discretisation distance <= bound", worst_ratio, 1.0, passed,
                           f"max quadrature drift {worst_integration:.2e}, "
                           f"max refinement drift {worst_surrogate:.2e}"), records


def check_correctness(seed=7):
    cfg = make_config(8)
    report = run_round_trips(cfg, 2, 100, seed)
    passed = report.correct == report.total and report.min_confidence >= 1.0 - 1e-9
    return CriterionResult(7, "QECM round trips", float(report.correct), float(report.total), passed,
                           f"min confidence {report.min_confidence:.12f}")


def check_indistinguishability(seed=0, n_samples=10_000, threads=None):
    cfg = make_config(8)
    exact_error = 0.0
    for x in (0, 1):
        for ell in (1, 2):
            avg = avg_ciphertext(cfg, x, ell, AverageMode.EXACT)
            exact_error = max(exact_error, float(np.max(np.abs(avg - np.eye(cfg.d) / cfg.d))))
    mc = avg_ciphertext(cfg, 0, 2, AverageMode.MONTE_CARLO, n_samples=n_samples, seed=seed, threads=threads)
    mc_error = float(np.linalg.norm(mc - np.eye(cfg.d) / cfg.d))
    limit = 5.0 / np.sqrt(n_samples)
    passed = exact_error <= 1e-12 and mc_error <= limit
    return CriterionResult(8, "key-averaged ciphertext = I/d", exact_error, 1e-12, passed,
                           f"Monte-Carlo error {mc_error:.2e} (limit {limit:.2e})")


def check_delta_formula():
    d = 2 ** 20
    pref = 3.0 * np.log2(20.0) / (2.0 * 20.0)
    expected = {5: pref * np.sqrt(5.0), 8: pref * np.sqrt(1.0 + 4.0 * 2.0 ** -60)}
    rel = max(abs(delta_bound(d, ell) - v) / v for ell, v in expected.items())
    # beyond these ell the d^(5 - ell) term drops below double precision
    grids = {d: range(1, 8), 16: range(1, 11)}
    decreasing = True
    for dim, ells in grids.items():
        values = [delta_bound(dim, ell) for ell in ells]
        decreasing = decreasing and all(b < a for a, b in zip(values, values[1:]))
    passed = rel <= 1e-12 and decreasing
    return CriterionResult(9, "delta formula", float(rel), 1e-12, passed,
                           f"strictly decreasing in ell: {decreasing}")


def check_determinism(seed=3):
    cfg = make_config(4)
    rng = np.random.default_rng(seed)
    x = random_matrix(rng, 16)
    runs = [mc_double_twirl(cfg, TwirlFamily.SANDWICH, x, 2_000, seed, threads=t) for t in (1, 4, 1)]
    same_twirl = all(np.array_equal(runs[0], r) for r in runs[1:])
    attacks = [simulate_measure_resend(make_config(8), 2, 3_000, seed, threads=t).wins for t in (1, 4)]
    passed = same_twirl and attacks[0] == attacks[1]
    return CriterionResult(10, "bitwise determinism across thread counts", float(passed), 1.0, passed,
                           f"twirl identical: {same_twirl}, attack wins {attacks}")


def run_acceptance(seed=0, threads=None):
    """
    Run all checks.

    Returns:
        dict: DataFrames 'summary', 'design_norms', 'discretization'
    """
    rng = np.random.default_rng(seed)
    design_row, design_table = check_design_norms()
    disc_row, disc_table = check_discretization()
    rows = [
        design_row,
        check_closed_form(rng),
        check_invariance(rng),
        check_monte_carlo(rng, threads=threads),
        check_discrete_variant(),
        disc_row,
        check_correctness(),
        check_indistinguishability(seed, threads=threads),
        check_delta_formula(),
        check_determinism(),
    ]
    for row in rows:
        log = logger.info if row.passed else logger.warning
        log(f"Criterion {row.criterion} ({row.name}): measured {row.measured} vs {row.threshold} -> "
            f"{format_pass_fail(row.passed)}")

    return {
        'summary': pd.DataFrame([r.to_dict() for r in rows]),
        'design_norms': pd.DataFrame(design_table),
        'discretization': pd.DataFrame(disc_table),
    }
