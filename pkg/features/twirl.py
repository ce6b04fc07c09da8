"""
Twirl Module
Boxed phase unitaries V = omega^(alpha Q + beta Q^2) and their Fourier
conjugates, with exact, Monte-Carlo and discrete (prime d) one- and two-fold
twirls built from them.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from core.config import MC_CHUNK_SIZE
from core.discretization import Convention, dft_matrix
from core.errors import ParameterError, ParityError, PrimalityError
from utils.logger import get_logger
from utils.parallel import chunked_sum
from utils.rng import Stream, require_seed, split_chunks, uniform_block
from utils.validation import is_prime, require_positive_int, require_square, require_two_copy

logger = get_logger(module_name="twirl")

LITERAL_CROSS_CHECK_MAX_D = 7


class Basis(Enum):
    Q = "q"
    P = "p"


class ParameterMode(Enum):
    CONTINUOUS = "continuous"
    INTEGER_MOD_D = "integer_mod_d"


class TwirlFamily(Enum):
    Q_ONLY = "q"
    P_ONLY = "p"
    SANDWICH = "sandwich"


def parse_basis(value):
    if isinstance(value, Basis):
        return value
    try:
        return Basis(str(value).strip().lower())
    except ValueError as e:
        raise ParameterError(f"Unknown basis '{value}', expected q or p") from e


def parse_family(value):
    if isinstance(value, TwirlFamily):
        return value
    key = str(value).strip().lower().replace('-', '_')
    aliases = {'q_only': 'q', 'qonly': 'q', 'p_only': 'p', 'ponly': 'p'}
    try:
        return TwirlFamily(aliases.get(key, key))
    except ValueError as e:
        raise ParameterError(f"Unknown twirl family '{value}', expected q, p or sandwich") from e


def require_odd_prime(cfg, force=False):
    """
    Integer-parameter constructions need an odd prime d on the odd-centered
    index set; `force` lifts the check for counterexample runs.

    Raises:
        ParityError: Even d
        PrimalityError: Odd composite d
    """
    if force:
        return
    if cfg.d % 2 == 0 or cfg.convention is not Convention.ODD_CENTERED:
        raise ParityError(f"Integer-parameter mode needs odd d with odd-centered labels, got d={cfg.d}")
    if not is_prime(cfg.d):
        raise PrimalityError(f"Integer-parameter mode needs prime d, got d={cfg.d}")


@dataclass(frozen=True)
class BoxedUnitaryParams:
    """
    Parameters of one boxed unitary.

    CONTINUOUS: alpha, beta real in [0, d)
    INTEGER_MOD_D: alpha, beta integer labels of the odd-centered set, d odd prime
    """

    basis: Basis
    alpha: float
    beta: float
    mode: ParameterMode = ParameterMode.CONTINUOUS

    def __post_init__(self):
        object.__setattr__(self, 'basis', parse_basis(self.basis))
        object.__setattr__(self, 'mode', ParameterMode(self.mode))

    def validate(self, cfg):
        """
        Raises:
            ParameterError: Parameters out of range
            ParityError / PrimalityError: Integer mode with an unsuitable d
        """
        if self.mode is ParameterMode.CONTINUOUS:
            for name, value in (('alpha', self.alpha), ('beta', self.beta)):
                if not 0.0 <= value < cfg.d:
                    raise ParameterError(f"{name} must lie in [0, {cfg.d}), got {value}")
            return
        require_odd_prime(cfg)
        for name, value in (('alpha', self.alpha), ('beta', self.beta)):
            if int(value) != value or not cfg.labels[0] <= value <= cfg.labels[-1]:
                raise ParameterError(f"{name} must be an integer label in I_{cfg.d}, got {value}")


# ============================================================================
# Boxed unitaries
# ============================================================================

def phase_vectors(cfg, alpha, beta):
    """
    Diagonals omega^(alpha i + beta i^2) for arrays of parameters.

    Args:
        cfg: DiscretizationConfig
        alpha, beta: arrays of shape (n,)

    Returns:
        np.ndarray: shape (n, d)
    """
    i = cfg.labels.astype(np.float64)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    beta = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    exponent = alpha[:, None] * i[None, :] + beta[:, None] * (i * i)[None, :]
    return np.exp(2j * np.pi * exponent / cfg.d)


def _integer_phase(cfg, alpha, beta):
    i = cfg.labels
    exponent = np.mod(int(alpha) * i + int(beta) * i * i, cfg.d)
    return np.exp(2j * np.pi * exponent / cfg.d)


def boxed_unitary(cfg, params):
    """
    Boxed phase unitary: diagonal in the Q box basis, or its DFT conjugate
    F diag F^dagger for the P basis.

    Returns:
        np.ndarray: d x d unitary
    """
    params.validate(cfg)
    if params.mode is ParameterMode.INTEGER_MOD_D:
        phases = _integer_phase(cfg, params.alpha, params.beta)
    else:
        phases = phase_vectors(cfg, params.alpha, params.beta)[0]
    u = np.diag(phases)
    if params.basis is Basis.P:
        f = dft_matrix(cfg)
        u = f @ u @ f.conj().T
    return u


def two_copy(u):
    """U (x) U."""
    return np.kron(u, u)


def conjugate_two_copy(u, x):
    """(U (x) U) x (U (x) U)^dagger."""
    uu = two_copy(u)
    return uu @ x @ uu.conj().T


# ============================================================================
# Exact twirls
# ============================================================================

def exact_single_twirl(cfg, basis, rho):
    """
    Average of V rho V^dagger over continuous (alpha, beta): erases the
    off-diagonal entries in the chosen box basis.
    """
    basis = parse_basis(basis)
    m = require_square(rho, "rho")
    if m.shape[0] != cfg.d:
        raise ParameterError(f"Expected a {cfg.d}x{cfg.d} matrix, got {m.shape}")
    if basis is Basis.Q:
        return np.diag(np.diag(m))
    f = dft_matrix(cfg)
    y = f.conj().T @ m @ f
    return f @ np.diag(np.diag(y)) @ f.conj().T


@lru_cache(maxsize=16)
def _set_equality_mask(d):
    """Mask over (a, b, a', b') that is True iff {a', b'} = {a, b}."""
    e = np.eye(d, dtype=bool)
    same = e[:, None, :, None] & e[None, :, None, :]
    swapped = e[:, None, None, :] & e[None, :, :, None]
    return (same | swapped).reshape(d * d, d * d)


def _in_basis(cfg, basis, x, rule):
    """Apply an entrywise rule to x expressed in the Q or P two-copy frame."""
    if basis is Basis.Q:
        return rule(x)
    f = dft_matrix(cfg)
    ff = np.kron(f, f)
    y = ff.conj().T @ x @ ff
    return ff @ rule(y) @ ff.conj().T


def exact_double_twirl(cfg, basis, x):
    """
    Two-fold twirl over continuous (alpha, beta) in the given basis.

    In the Q frame entry (ij),(i'j') survives iff i + j = i' + j' and
    i^2 + j^2 = i'^2 + j'^2 over the integers, i.e. {i', j'} = {i, j}.
    """
    basis = parse_basis(basis)
    m = require_two_copy(x, cfg.d)
    mask = _set_equality_mask(cfg.d)
    return _in_basis(cfg, basis, m, lambda y: np.where(mask, y, 0.0))


# ============================================================================
# Monte-Carlo twirl
# ============================================================================

def sandwich_unitaries(cfg, params, f):
    """Batched V'' F V' F^dagger V for rows (a, b, a', b', a'', b'')."""
    v = phase_vectors(cfg, params[:, 0], params[:, 1])
    vp = phase_vectors(cfg, params[:, 2], params[:, 3])
    vpp = phase_vectors(cfg, params[:, 4], params[:, 5])
    # (F diag(vp) F^dagger) diag(v), then diag(vpp) on the left
    middle = np.einsum('ik,sk,jk->sij', f, vp, f.conj())
    return vpp[:, :, None] * middle * v[:, None, :]


def mc_double_twirl(cfg, family, x, n_samples, seed, threads=None, chunk_size=MC_CHUNK_SIZE):
    """
    Empirical two-fold twirl over n_samples i.i.d. parameter draws.

    QOnly/POnly draw (alpha, beta); Sandwich draws all six parameters of
    V'' V~' V. Sample s uses the chunk generator of s // chunk_size, so the
    mean is identical for every thread count.

    Returns:
        np.ndarray: d^2 x d^2 averaged matrix
    """
    family = parse_family(family)
    n_samples = require_positive_int(n_samples, "n_samples")
    seed = require_seed(seed)
    m = require_two_copy(x, cfg.d)
    d = cfg.d
    chunks = split_chunks(n_samples, chunk_size)

    if family is TwirlFamily.SANDWICH:
        f = dft_matrix(cfg)

        def chunk_sum(chunk):
            params = uniform_block(seed, chunk, 6, d, Stream.TWIRL)
            u = sandwich_unitaries(cfg, params, f)
            uu = np.einsum('sij,skl->sikjl', u, u).reshape(chunk.size, d * d, d * d)
            return np.einsum('sij,jk,slk->il', uu, m, uu.conj(), optimize=True)

        total = chunked_sum(chunk_sum, chunks, threads)
        return total / n_samples

    def weight_sum(chunk):
        params = uniform_block(seed, chunk, 2, d, Stream.TWIRL)
        v = phase_vectors(cfg, params[:, 0], params[:, 1])
        v2 = (v[:, :, None] * v[:, None, :]).reshape(chunk.size, d * d)
        return v2.T @ v2.conj()

    weights = chunked_sum(weight_sum, chunks, threads) / n_samples
    basis = Basis.Q if family is TwirlFamily.Q_ONLY else Basis.P
    return _in_basis(cfg, basis, m, lambda y: y * weights)


# ============================================================================
# Discrete (integer-parameter) twirl
# ============================================================================

def _mod_rule_mask(cfg):
    i = cfg.labels
    s = i[:, None] + i[None, :]
    q = i[:, None] ** 2 + i[None, :] ** 2
    same_sum = np.mod(s[:, :, None, None] - s[None, None, :, :], cfg.d) == 0
    same_sq = np.mod(q[:, :, None, None] - q[None, None, :, :], cfg.d) == 0
    return (same_sum & same_sq).reshape(cfg.d ** 2, cfg.d ** 2)


def discrete_double_twirl(cfg, basis, x, force=False):
    """
    Exhaustive average over all d^2 integer (alpha, beta) labels, via the
    mod-d Kronecker rule: entry (ij),(i'j') survives iff i + j = i' + j' and
    i^2 + j^2 = i'^2 + j'^2 modulo d.

    Args:
        force: allow composite (or even) d

    Raises:
        ParityError / PrimalityError: Unsuitable d without force
    """
    basis = parse_basis(basis)
    require_odd_prime(cfg, force)
    m = require_two_copy(x, cfg.d)
    mask = _mod_rule_mask(cfg)
    return _in_basis(cfg, basis, m, lambda y: np.where(mask, y, 0.0))


def literal_discrete_double_twirl(cfg, basis, x):
    """
    The same average computed by summing all d^2 conjugations explicitly
    (small d only; used to cross-check the Kronecker rule).
    """
    basis = parse_basis(basis)
    m = require_two_copy(x, cfg.d)
    total = np.zeros_like(m)
    for a in cfg.labels:
        for b in cfg.labels:
            v = np.diag(_integer_phase(cfg, a, b))
            total = total + _in_basis(cfg, basis, m, lambda y, v=v: conjugate_two_copy(v, y))
    return total / cfg.d ** 2


def discrete_cross_check(cfg, basis, x, force=False):
    """
    Max entry difference between the Kronecker rule and literal summation.

    Raises:
        ParameterError: d above the literal-summation limit
    """
    if cfg.d > LITERAL_CROSS_CHECK_MAX_D:
        raise ParameterError(f"Literal cross-check limited to d <= {LITERAL_CROSS_CHECK_MAX_D}, got d={cfg.d}")
    rule = discrete_double_twirl(cfg, basis, x, force=force)
    literal = literal_discrete_double_twirl(cfg, basis, x)
    error = float(np.max(np.abs(rule - literal)))
    logger.debug(f"Discrete twirl cross-check d={cfg.d} basis={parse_basis(basis).value}: {error:.2e}")
    return error
