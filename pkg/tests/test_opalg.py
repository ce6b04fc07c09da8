"""
Operator Algebra Test Module
Tests norms, the structural two-copy operators, the A/K split and the
box-space grid (index conventions, DFT)
"""

import numpy as np

from core.discretization import (DiscretizationConfig, dft_matrix, make_config, projected_position,
                                 quadrature_operators)
from core.errors import (DegenerateDimensionError, DimensionError, ParameterError, ParityError,
                         UnsupportedParameterError)
from core.opalg import (PairBasisOperator, PairKind, decompose_ak, diag_projector,
                        diamond_bound_from_2to2, haar_double_twirl, hs_inner, identity_operator,
                        ladder_diag, ladder_swap, matrix_from_json, matrix_to_json, operator_norm,
                        project_to_k, schatten_norm, swap_operator, swap_trace, trace_distance)
from tests.common import assert_result, expect_error, new_result, random_matrix, run_check


def run_opalg_checks():
    """
    Test the operator algebra substrate.

    Returns:
        dict: Test result with status and details
    """
    result = new_result()
    result['output'].append("Testing operator algebra...")

    def norms():
        x = np.diag([3.0, -4.0])
        assert abs(schatten_norm(x, 1) - 7.0) < 1e-12
        assert abs(schatten_norm(x, 2) - 5.0) < 1e-12
        assert abs(schatten_norm(x, 1, trace_norm=True) - 3.5) < 1e-12
        assert abs(operator_norm(x) - 4.0) < 1e-12
        expect_error(UnsupportedParameterError, schatten_norm, x, 3)

    def rectangular():
        row = np.array([[3.0, 4.0]])
        expect_error(DimensionError, schatten_norm, row, 2)
        assert abs(schatten_norm(row, 2, allow_rectangular=True) - 5.0) < 1e-12
        assert abs(schatten_norm(row, 1, allow_rectangular=True) - 5.0) < 1e-12
        # ||X||_1 <= sqrt(min(d1, d2)) ||X||_2
        x = random_matrix(1, 3, 5)
        lhs = schatten_norm(x, 1, allow_rectangular=True)
        rhs = np.sqrt(3.0) * schatten_norm(x, 2, allow_rectangular=True)
        assert lhs <= rhs + 1e-12, f"{lhs} > {rhs}"

    def distances():
        zero = np.diag([1.0, 0.0])
        one = np.diag([0.0, 1.0])
        assert abs(trace_distance(zero, one) - 1.0) < 1e-12
        assert trace_distance(zero, zero) < 1e-15
        expect_error(DimensionError, trace_distance, zero, np.eye(3))
        assert abs(diamond_bound_from_2to2(0.25, 2) - 0.5) < 1e-15

    def structural_operators():
        d = 4
        i_op, f_op, e_op = identity_operator(d), swap_operator(d), diag_projector(d)
        assert abs(hs_inner(i_op, i_op) - d * d) < 1e-12
        assert abs(hs_inner(f_op, f_op) - d * d) < 1e-12
        assert abs(hs_inner(i_op, f_op) - d) < 1e-12
        assert abs(swap_trace(f_op, d) - d * d) < 1e-12
        assert abs(swap_trace(i_op, d) - d) < 1e-12
        # I = E + sum L_u and F = E + sum M_u
        assert np.allclose(e_op + sum(ladder_diag(d, u) for u in range(1, d)), i_op)
        assert np.allclose(e_op + sum(ladder_swap(d, u) for u in range(1, d)), f_op)
        assert np.allclose(f_op @ f_op, i_op)
        expect_error(ParameterError, PairBasisOperator, PairKind.LADDER_DIAG, d, 0)
        expect_error(ParameterError, PairBasisOperator, PairKind.SWAP, d, 1)

    def ak_split():
        d = 3
        k = project_to_k(random_matrix(2, d * d), d)
        x = 2.0 * identity_operator(d) + 3.0 * swap_operator(d) + k
        ak = decompose_ak(x, d)
        assert abs(ak.a_coeff - 2.0) < 1e-12 and abs(ak.f_coeff - 3.0) < 1e-12
        assert np.allclose(ak.k_part, k)
        assert abs(hs_inner(identity_operator(d), ak.k_part)) < 1e-12
        assert abs(hs_inner(swap_operator(d), ak.k_part)) < 1e-12
        assert abs(ak.a_norm() - np.linalg.norm(ak.a_part())) < 1e-12
        unit = np.zeros((4, 4))
        unit[1, 1] = 1.0
        small = decompose_ak(unit, 2)
        assert abs(small.a_coeff - 1.0 / 3.0) < 1e-12 and abs(small.f_coeff + 1.0 / 6.0) < 1e-12
        expect_error(DegenerateDimensionError, decompose_ak, np.eye(1), 1)
        expect_error(DimensionError, decompose_ak, np.eye(8), 3)

    def trace_norm_trials():
        # ||X||_1 <= sqrt(min(d1, d2)) ||X||_2 on random rectangular shapes
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            d1, d2 = rng.integers(1, 7, size=2)
            x = rng.standard_normal((d1, d2)) + 1j * rng.standard_normal((d1, d2))
            lhs = schatten_norm(x, 1, allow_rectangular=True)
            rhs = np.sqrt(min(d1, d2)) * schatten_norm(x, 2, allow_rectangular=True)
            assert lhs <= rhs * (1.0 + 1e-12), f"{lhs} > {rhs} for shape {(d1, d2)}"

    def inner_products():
        x, y = random_matrix(5, 4), random_matrix(6, 4)
        assert abs(hs_inner(x, y) - np.conj(hs_inner(y, x))) < 1e-12
        naive = 0j
        for i in range(4):
            for j in range(4):
                naive += np.conj(x[i, j]) * y[i, j]
        assert abs(hs_inner(x, y) - naive) < 1e-12
        assert abs(hs_inner(x, y) - np.trace(x.conj().T @ y)) < 1e-12
        expect_error(DimensionError, hs_inner, x, np.eye(3))

    def swap_involution():
        for d in range(2, 9):
            f_op = swap_operator(d)
            assert np.array_equal(f_op @ f_op, identity_operator(d)), f"F^2 != I for d={d}"

    def ak_geometry():
        for d in (2, 3, 4):
            x, y = random_matrix(10 + d, d * d), random_matrix(20 + d, d * d)
            ax, ay = decompose_ak(x, d), decompose_ak(y, d)
            combined = decompose_ak(2.0 * x - 1j * y, d)
            assert abs(combined.a_coeff - (2.0 * ax.a_coeff - 1j * ay.a_coeff)) < 1e-12
            assert abs(combined.f_coeff - (2.0 * ax.f_coeff - 1j * ay.f_coeff)) < 1e-12
            assert np.allclose(combined.k_part, 2.0 * ax.k_part - 1j * ay.k_part, atol=1e-12)

            total = np.linalg.norm(x) ** 2
            split = ax.a_norm() ** 2 + np.linalg.norm(ax.k_part) ** 2
            assert abs(total - split) <= 1e-9 * total, f"d={d}: {total} vs {split}"
            assert abs(hs_inner(ax.a_part(), ax.k_part)) < 1e-10

    def haar_twirl():
        d = 3
        assert np.allclose(haar_double_twirl(identity_operator(d), d), identity_operator(d))
        assert np.allclose(haar_double_twirl(swap_operator(d), d), swap_operator(d))
        k = project_to_k(random_matrix(3, d * d), d)
        assert np.max(np.abs(haar_double_twirl(k, d))) < 1e-12

    def json_format():
        x = random_matrix(4, 2, 3)
        doc = matrix_to_json(x)
        assert doc['rows'] == 2 and doc['cols'] == 3 and len(doc['re']) == 6
        assert np.array_equal(matrix_from_json(doc), x)
        bad = dict(doc, re=doc['re'][:-1])
        expect_error(DimensionError, matrix_from_json, bad)
        expect_error(DimensionError, matrix_from_json, {'rows': 1})

    def grid():
        even, odd = make_config(4), make_config(5)
        assert even.labels.tolist() == [-2, -1, 0, 1]
        assert odd.labels.tolist() == [-2, -1, 0, 1, 2]
        for cfg in (even, odd, make_config(64)):
            edges = cfg.box_edges()
            assert abs(edges[0] + cfg.q_max) < 1e-12 and abs(edges[-1] - cfg.q_max) < 1e-12
            assert abs(cfg.d * cfg.delta - 2.0 * cfg.q_max) < 1e-12
        assert even.position(-2) == 0 and even.position(2) == 0
        assert odd.reduce_label(3) == -2
        expect_error(ParityError, DiscretizationConfig, 5, 'even_centered')
        expect_error(ParityError, DiscretizationConfig, 4, 'odd_centered')
        expect_error(ParameterError, DiscretizationConfig, 0)
        centres = np.real(np.diag(projected_position(even)))
        assert np.allclose(centres, (even.labels + 0.5) * even.delta)

    def dft():
        for d in (4, 5, 8):
            f = dft_matrix(make_config(d))
            assert np.allclose(f.conj().T @ f, np.eye(d))
            f4 = np.linalg.matrix_power(f, 4)
            assert np.allclose(f4, np.eye(d)), f"F^4 != I for d={d}"

    def quadratures():
        for d in (4, 5):
            cfg = make_config(d)
            ops = quadrature_operators(cfg)
            assert np.allclose(np.diag(ops.q_op), cfg.labels)
            assert np.allclose(ops.p_op, ops.p_op.conj().T)
            assert np.allclose(np.linalg.eigvalsh(ops.p_op), np.sort(cfg.labels))
            assert np.allclose(ops.f_dft.conj().T @ ops.p_op @ ops.f_dft, ops.q_op)

    run_check(result, "Schatten norms", norms)
    run_check(result, "Rectangular Schatten norms", rectangular)
    run_check(result, "Trace distance and diamond bound", distances)
    run_check(result, "Structural two-copy operators", structural_operators)
    run_check(result, "Trace-norm bound on random rectangular matrices", trace_norm_trials)
    run_check(result, "Hilbert-Schmidt inner product", inner_products)
    run_check(result, "Swap is an involution", swap_involution)
    run_check(result, "A/K decomposition", ak_split)
    run_check(result, "A/K split is linear and orthogonal", ak_geometry)
    run_check(result, "Haar two-fold twirl", haar_twirl)
    run_check(result, "Matrix JSON format", json_format)
    run_check(result, "Box grid and index conventions", grid)
    run_check(result, "DFT between box bases", dft)
    run_check(result, "Box quadrature operators", quadratures)

    return result


def test_opalg():
    assert_result(run_opalg_checks())


if __name__ == "__main__":
    result = run_opalg_checks()
    print("\n✓ Operator algebra test PASSED" if result['passed'] else "\n✗ Operator algebra test FAILED")
    for error in result['errors']:
        print(f"  ERROR: {error}")
