"""
Design Module
The one-round map R = G_Q o G_P o G_Q in closed form, its powers on the
subspace K orthogonal to span{I, F}, and the 2->2 norm of R^ell on K that
certifies the d^-ell approximate two-design.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import linalg

from core.config import BRUTE_FORCE_MAX_D, K_MEMBERSHIP_TOLERANCE
from core.errors import ParameterError, ResourceGuardError, SubspaceViolationError
from core.opalg import (decompose_ak, diamond_bound_from_2to2, haar_double_twirl,
                        identity_operator, swap_operator, swap_trace)
from utils.logger import get_logger
from utils.validation import require_positive_int, require_two_copy

logger = get_logger(module_name="design")

STRUCTURED_MAX_D = 64
GRAM_SCHMIDT_DROP = 1e-8
BYTES_PER_ENTRY = 16


class NormMethod(Enum):
    BRUTE_FORCE = "brute"
    RANK_STRUCTURED = "structured"


def parse_method(value):
    if isinstance(value, NormMethod):
        return value
    key = str(value).strip().lower().replace('-', '_')
    aliases = {'brute_force': 'brute', 'bruteforce': 'brute',
               'rank_structured': 'structured', 'rankstructured': 'structured'}
    try:
        return NormMethod(aliases.get(key, key))
    except ValueError as e:
        raise ParameterError(f"Unknown norm method '{value}', expected brute or structured") from e


def design_epsilon(d, ell):
    """Design accuracy d^-ell after ell rounds."""
    return float(d) ** (-int(ell))


# ============================================================================
# Functionals
# ============================================================================

@dataclass(frozen=True)
class KCoefficients:
    """
    Ladder functionals of a two-copy operator.

    s[k] = sum_a X[(a, a+u), (a, a+u)], t[k] = sum_a X[(a, a+u), (a+u, a)],
    c = sum_a X[(a, a), (a, a)], for offsets u = offsets[k] = 1..d-1
    (position arithmetic mod d).
    """

    s: np.ndarray
    t: np.ndarray
    c: complex
    d: int

    @property
    def offsets(self):
        return np.arange(1, self.d)

    def labels(self, cfg):
        """The offsets as labels of I_d."""
        return [cfg.reduce_label(u) for u in self.offsets]

    def trace(self):
        """sum s + c = Tr X."""
        return complex(np.sum(self.s) + self.c)

    def swap_trace(self):
        """sum t + c = Tr F X."""
        return complex(np.sum(self.t) + self.c)


def _ladder_index(d):
    a = np.arange(d)[None, :]
    u = np.arange(1, d)[:, None]
    return np.broadcast_to(a, (d - 1, d)), (a + u) % d


def k_coefficients(cfg, x):
    """Compute the ladder functionals s, t and c of x."""
    d = cfg.d
    t4 = require_two_copy(x, d).reshape(d, d, d, d)
    a, b = _ladder_index(d)
    diag = np.arange(d)
    return KCoefficients(
        s=t4[a, b, a, b].sum(axis=1),
        t=t4[a, b, b, a].sum(axis=1),
        c=complex(t4[diag, diag, diag, diag].sum()),
        d=d,
    )


def _ladder_combination(d, xi, lam, eta):
    """sum_u xi_u L_u + sum_u lam_u M_u + eta E as a dense matrix."""
    t4 = np.zeros((d, d, d, d), dtype=np.complex128)
    a, b = _ladder_index(d)
    t4[a, b, a, b] = xi[:, None]
    t4[a, b, b, a] = lam[:, None]
    diag = np.arange(d)
    t4[diag, diag, diag, diag] = eta
    return t4.reshape(d * d, d * d)


# ============================================================================
# The R map
# ============================================================================

def apply_R(cfg, x):
    """
    One round G_Q o G_P o G_Q in closed form:

        R(X) = sum_u s_u L_u / d^2 + sum_u t_u M_u / d^2 + c (I + F - E) / d^3
               + (I / d^2 - (I + F - E) / d^3) Tr X
               + (F / d^2 - (I + F - E) / d^3) Tr F X

    Returns:
        np.ndarray: d^2 x d^2 matrix
    """
    d = cfg.d
    m = require_two_copy(x, d)
    k = k_coefficients(cfg, m)
    tr_x = complex(np.trace(m))
    tr_fx = swap_trace(m, d)

    d2, d3 = float(d * d), float(d ** 3)
    # I + F - E = sum L_u + sum M_u + E, so its weight joins every ladder term
    common = (k.c - tr_x - tr_fx) / d3
    out = _ladder_combination(d, k.s / d2 + common, k.t / d2 + common, common)
    out = out + (tr_x / d2) * identity_operator(d) + (tr_fx / d2) * swap_operator(d)
    return out


def _check_in_k(cfg, x, auto_project):
    ak = decompose_ak(x, cfg.d)
    residual = ak.a_norm()
    limit = K_MEMBERSHIP_TOLERANCE * max(1.0, float(np.linalg.norm(x)))
    if residual <= limit:
        return np.asarray(x, dtype=np.complex128), False
    if not auto_project:
        raise SubspaceViolationError(
            f"Input has an A-component of norm {residual:.3e} (limit {limit:.1e}); project it to K first"
        )
    logger.warning(f"Input outside K by {residual:.3e}; projected before applying R^ell")
    return ak.k_part, True


@dataclass(frozen=True)
class RPowerCoefficients:
    """R^ell(X) = sum xi_u L_u + sum lam_u M_u + eta E for X in K."""

    xi: np.ndarray
    lam: np.ndarray
    eta: complex
    ell: int
    auto_projected: bool = False


def r_power_coefficients(cfg, x_in_k, ell, auto_project=False):
    """
    Closed-form coefficients after ell rounds:

        xi_u  = s_u / d^(ell+1) + c (1 - d^-ell) / (d^(ell+1) (d - 1))
        lam_u = t_u / d^(ell+1) + c (1 - d^-ell) / (d^(ell+1) (d - 1))
        eta   = c / d^(2 ell + 1)

    Raises:
        SubspaceViolationError: x not in K and auto_project is False
    """
    ell = require_positive_int(ell, "ell")
    d = cfg.d
    x, projected = _check_in_k(cfg, x_in_k, auto_project)
    k = k_coefficients(cfg, x)

    scale = float(d) ** (ell + 1)
    feed = k.c * (1.0 - float(d) ** (-ell)) / (scale * (d - 1))
    return RPowerCoefficients(
        xi=k.s / scale + feed,
        lam=k.t / scale + feed,
        eta=k.c / float(d) ** (2 * ell + 1),
        ell=ell,
        auto_projected=projected,
    )


def apply_R_power(cfg, x_in_k, ell, auto_project=False):
    """
    R^ell on K in closed form.

    Raises:
        SubspaceViolationError: x not in K and auto_project is False
    """
    coeffs = r_power_coefficients(cfg, x_in_k, ell, auto_project)
    return _ladder_combination(cfg.d, coeffs.xi, coeffs.lam, coeffs.eta)


def apply_R_iterated(cfg, x, ell):
    """R applied ell times (ell >= 0) to any two-copy operator."""
    out = require_two_copy(x, cfg.d)
    for _ in range(int(ell)):
        out = apply_R(cfg, out)
    return out


def haar_deviation(cfg, x, ell):
    """
    ||R^ell(X) - Haar(X)||_2 / ||X||_2, bounded by d^-ell.
    """
    m = require_two_copy(x, cfg.d)
    scale = float(np.linalg.norm(m))
    if scale == 0.0:
        return 0.0
    diff = apply_R_iterated(cfg, m, ell) - haar_double_twirl(m, cfg.d)
    return float(np.linalg.norm(diff)) / scale


# ============================================================================
# 2->2 norm on K
# ============================================================================

@dataclass
class TwirlReport:
    """Measured 2->2 norm of R^ell on K against the bound d^-ell."""

    d: int
    ell: int
    norm_2to2_on_K: float
    bound: float
    method: NormMethod
    residual_vs_oracle: float = None
    oracle: str = None
    coefficients: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.norm_2to2_on_K <= self.bound + 1e-10

    def to_dict(self):
        return {
            'd': self.d,
            'ell': self.ell,
            'norm_2to2_on_K': self.norm_2to2_on_K,
            'bound': self.bound,
            'diamond_bound': diamond_bound_from_2to2(self.norm_2to2_on_K, self.d),
            'method': self.method.value,
            'residual_vs_oracle': self.residual_vs_oracle,
            'oracle': self.oracle,
            'coefficients': self.coefficients,
            'passed': self.passed,
        }


def _coefficient_weights(d, ell):
    scale = float(d) ** (ell + 1)
    return {
        'ladder': 1.0 / scale,
        'diag_feed': (1.0 - float(d) ** (-ell)) / (scale * (d - 1)),
        'eta': float(d) ** (-(2 * ell + 1)),
    }


def structured_norm(d, ell):
    """
    Norm of R^ell on K from two (2d - 1)-dimensional Gram matrices.

    R^ell maps X in K to sum_k O_k <G_k, X>, with outputs O_k in
    {L_u, M_u, E} and functionals G_k in their span. In coordinates of that
    orthogonal basis (each element of squared norm d), I and F are
    (1..1, 0..0, 1) and (0..0, 1..1, 1); the functionals are projected onto
    K by removing those two directions.
    """
    n = d - 1
    w = _coefficient_weights(d, ell)
    dim = 2 * n + 1

    functionals = np.zeros((dim, dim))
    functionals[:n, :n] = w['ladder'] * np.eye(n)
    functionals[n:2 * n, n:2 * n] = w['ladder'] * np.eye(n)
    functionals[:2 * n, -1] = w['diag_feed']
    functionals[-1, -1] = w['eta']

    v_i = np.concatenate([np.ones(n), np.zeros(n), [1.0]])
    v_f = np.concatenate([np.zeros(n), np.ones(n), [1.0]])
    basis_a = np.stack([v_i, v_f], axis=1)
    proj_k = np.eye(dim) - basis_a @ np.linalg.solve(basis_a.T @ basis_a, basis_a.T)

    h = functionals @ proj_k
    gram_in = d * (h @ h.T)
    gram_out = d * np.eye(dim)
    r = linalg.cholesky(gram_out)
    top = linalg.eigvalsh(r @ gram_in @ r.T)[-1]
    return float(np.sqrt(max(top, 0.0)))


@lru_cache(maxsize=4)
def r_superoperator(cfg):
    """
    Dense d^4 x d^4 matrix of R acting on row-major vectorised operators.
    """
    d2 = cfg.d * cfg.d
    n = d2 * d2
    sup = np.empty((n, n), dtype=np.complex128)
    unit = np.zeros((d2, d2), dtype=np.complex128)
    for col in range(n):
        r, c = divmod(col, d2)
        unit[r, c] = 1.0
        sup[:, col] = apply_R(cfg, unit).ravel()
        unit[r, c] = 0.0
    return sup


@lru_cache(maxsize=4)
def k_orthonormal_basis(d):
    """
    Orthonormal basis of K (d^4 - 2 vectors): Gram-Schmidt with one
    reorthogonalisation pass over the projected matrix units in
    lexicographic order; dependent vectors are dropped.
    """
    d2 = d * d
    n = d2 * d2
    # I and F are real, so K has a real orthonormal basis
    v_a = np.stack([identity_operator(d).real.ravel(), swap_operator(d).real.ravel()], axis=1)
    proj_k = np.eye(n) - v_a @ np.linalg.solve(v_a.T @ v_a, v_a.T)

    basis = np.zeros((n, n - 2))
    rank = 0
    for col in range(n):
        v = proj_k[:, col].copy()
        for _ in range(2):
            q = basis[:, :rank]
            v = v - q @ (q.T @ v)
        norm = np.linalg.norm(v)
        if norm < GRAM_SCHMIDT_DROP:
            continue
        basis[:, rank] = v / norm
        rank += 1
        if rank == n - 2:
            break
    return basis[:, :rank]


def brute_force_norm(cfg, ell):
    """Largest singular value of R^ell restricted to an orthonormal K basis."""
    sup = np.linalg.matrix_power(r_superoperator(cfg), int(ell))
    q = k_orthonormal_basis(cfg.d)
    return float(linalg.svdvals(q.T @ sup @ q)[0])


def brute_force_memory(d):
    """Approximate bytes held by the brute-force path."""
    n = d ** 4
    return 4 * n * n * BYTES_PER_ENTRY


def norm_on_K(cfg, ell, method, allow_large=False):
    """
    Measure ||R^ell restricted to K||_{2->2}.

    BRUTE_FORCE builds the full superoperator (d <= brute-force limit unless
    allow_large); RANK_STRUCTURED uses the ladder factorisation. When d
    allows both, the other method is run as the oracle.

    Raises:
        ResourceGuardError: BRUTE_FORCE above the d limit without allow_large
        ParameterError: d outside 2..64 or ell < 1
    """
    method = parse_method(method)
    ell = require_positive_int(ell, "ell")
    d = cfg.d
    if d < 2 or d > STRUCTURED_MAX_D:
        raise ParameterError(f"norm_on_K supports 2 <= d <= {STRUCTURED_MAX_D}, got d={d}")
    if method is NormMethod.BRUTE_FORCE and d > BRUTE_FORCE_MAX_D and not allow_large:
        raise ResourceGuardError(
            f"Brute-force norm for d={d} needs about {brute_force_memory(d) / 2 ** 30:.1f} GiB; "
            f"limit is d <= {BRUTE_FORCE_MAX_D} (use allow_large to override)"
        )

    structured = structured_norm(d, ell)
    residual, oracle = None, None

    if method is NormMethod.BRUTE_FORCE:
        norm = brute_force_norm(cfg, ell)
        residual, oracle = abs(norm - structured), NormMethod.RANK_STRUCTURED.value
    else:
        norm = structured
        if d <= BRUTE_FORCE_MAX_D:
            residual = abs(norm - brute_force_norm(cfg, ell))
            oracle = NormMethod.BRUTE_FORCE.value

    report = TwirlReport(
        d=d,
        ell=ell,
        norm_2to2_on_K=norm,
        bound=design_epsilon(d, ell),
        method=method,
        residual_vs_oracle=residual,
        oracle=oracle,
        coefficients=_coefficient_weights(d, ell),
    )
    logger.info(
        f"norm_on_K d={d} ell={ell} {method.value}: {norm:.15e} (bound {report.bound:.3e}, "
        f"residual {residual})"
    )
    return report
