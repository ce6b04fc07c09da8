"""
Encryption Module
One-bit quantum encryption of a classical message with the boxed-unitary
design as key space: key sampling, encryption, decryption, key-averaged
ciphertexts, the unclonability bound and a measure-and-resend baseline
attack.

The plaintext lives on H_sign (x) H_dist, identified with the box kets by
j >= 0 <-> (0, j) and j < 0 <-> (1, |j| - 1).
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from core.config import DELTA_LOG_BASE, MC_CHUNK_SIZE, TIE_TOLERANCE
from core.discretization import Convention, dft_matrix
from core.errors import DomainError, ParameterError, ParityError
from core.opalg import matrix_to_json
from features.twirl import Basis, exact_single_twirl, require_odd_prime, sandwich_unitaries
from utils.logger import get_logger
from utils.parallel import chunked_sum
from utils.rng import (Chunk, Stream, integer_block, require_seed, split_chunks,
                       uniform_block)
from utils.validation import require_bit, require_positive_int, validate_density_matrix

logger = get_logger(module_name="encryption")

PARAMS_PER_ROUND = 6
SMALL_DELTA_MIN_ELL = 5


# ============================================================================
# Sign / distance split
# ============================================================================

@dataclass(frozen=True)
class SignDistIndex:
    """Label j as (sign bit, distance from the origin)."""

    sign: int
    dist: int


def sign_dist_split(label):
    """j >= 0 -> (0, j); j < 0 -> (1, |j| - 1)."""
    j = int(label)
    if j >= 0:
        return SignDistIndex(0, j)
    return SignDistIndex(1, -j - 1)


def sign_dist_join(index):
    """Inverse of sign_dist_split: (-1)^s (r + s)."""
    s, r = int(index.sign), int(index.dist)
    if s not in (0, 1) or r < 0:
        raise ParameterError(f"Invalid sign/dist index ({s}, {r})")
    return r if s == 0 else -(r + 1)


def _check_scheme(cfg, experimental):
    if experimental:
        require_odd_prime(cfg)
        return
    if cfg.d % 2 != 0 or cfg.convention is not Convention.EVEN_CENTERED:
        raise ParityError(
            f"The standard scheme needs even d with even-centered labels, got d={cfg.d}; "
            f"odd prime d is available with experimental=True"
        )


def sign_masks(cfg, experimental=False):
    """
    Boolean masks over positions for sign 0 and sign 1.

    The experimental odd-d scheme drops the origin: sign 0 is j > 0, sign 1 is j < 0.
    """
    labels = cfg.labels
    if experimental:
        return labels > 0, labels < 0
    return labels >= 0, labels < 0


# ============================================================================
# Keys and states
# ============================================================================

@dataclass(frozen=True)
class QecmKey:
    """
    6 * ell design parameters, grouped per round as
    (alpha, beta, alpha', beta', alpha'', beta'').
    """

    ell: int
    params: tuple
    d: int
    experimental: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'params', tuple(float(p) for p in self.params))
        if self.ell < 0:
            raise ParameterError(f"ell must be non-negative, got {self.ell}")
        if len(self.params) != PARAMS_PER_ROUND * self.ell:
            raise ParameterError(
                f"Key for ell={self.ell} needs {PARAMS_PER_ROUND * self.ell} parameters, got {len(self.params)}"
            )
        if self.experimental:
            half = (self.d - 1) // 2
            if any(p != int(p) or abs(p) > half for p in self.params):
                raise ParameterError(f"Experimental keys need integer labels in [-{half}, {half}]")
        elif any(not 0.0 <= p < self.d for p in self.params):
            raise ParameterError(f"Key parameters must lie in [0, {self.d})")

    def rounds(self):
        """Parameters as an (ell, 6) array."""
        return np.asarray(self.params, dtype=np.float64).reshape(self.ell, PARAMS_PER_ROUND)

    def to_dict(self):
        return {'d': self.d, 'ell': self.ell, 'params': list(self.params), 'experimental': self.experimental}


def _key_draws(cfg, ell, chunk, seed, experimental):
    width = PARAMS_PER_ROUND * ell
    if experimental:
        half = (cfg.d - 1) // 2
        return integer_block(seed, chunk, width, -half, half + 1, Stream.KEY).astype(np.float64)
    return uniform_block(seed, chunk, width, cfg.d, Stream.KEY)


def sample_keys(cfg, ell, n_keys, seed, experimental=False):
    """
    n_keys i.i.d. keys; key k depends only on (seed, k).

    Raises:
        ParityError: Odd d in the standard scheme
    """
    _check_scheme(cfg, experimental)
    ell = require_positive_int(ell, "ell")
    seed = require_seed(seed)
    keys = []
    for chunk in split_chunks(require_positive_int(n_keys, "n_keys"), MC_CHUNK_SIZE):
        for row in _key_draws(cfg, ell, chunk, seed, experimental):
            keys.append(QecmKey(ell=ell, params=row, d=cfg.d, experimental=experimental))
    return keys


def sample_key(cfg, ell, seed, experimental=False):
    """One uniformly drawn key, deterministic per seed."""
    return sample_keys(cfg, ell, 1, seed, experimental)[0]


def plaintext_weights(cfg, x, experimental=False):
    """Diagonal of the plaintext state: uniform on the labels whose sign is x."""
    _check_scheme(cfg, experimental)
    x = require_bit(x)
    mask = sign_masks(cfg, experimental)[x]
    return mask.astype(np.float64) / mask.sum()


def plaintext_state(cfg, x, experimental=False):
    """
    |x><x|_sign (x) maximally mixed dist register, as a d x d Q-diagonal
    density matrix.

    Raises:
        ParityError: Odd d in the standard scheme
    """
    return np.diag(plaintext_weights(cfg, x, experimental).astype(np.complex128))


def round_unitaries(cfg, rounds):
    """Batched per-round unitaries V'' V~' V for an (n, 6) parameter array."""
    return sandwich_unitaries(cfg, np.atleast_2d(rounds), dft_matrix(cfg))


def key_unitary(cfg, key):
    """
    U_k = R_ell ... R_1 with R = V''(a'', b'') V~'(a', b') V(a, b); round 1 acts first.
    """
    u = np.eye(cfg.d, dtype=np.complex128)
    if key.ell == 0:
        return u
    for r in round_unitaries(cfg, key.rounds()):
        u = r @ u
    return u


def batch_key_unitaries(cfg, params, ell):
    """Key unitaries for an (n, 6 ell) parameter array, shape (n, d, d)."""
    n = params.shape[0]
    u = np.broadcast_to(np.eye(cfg.d, dtype=np.complex128), (n, cfg.d, cfg.d)).copy()
    for r in range(ell):
        block = params[:, PARAMS_PER_ROUND * r:PARAMS_PER_ROUND * (r + 1)]
        u = np.matmul(round_unitaries(cfg, block), u)
    return u


# ============================================================================
# Encryption / decryption
# ============================================================================

@dataclass(frozen=True)
class Ciphertext:
    """Encrypted d x d density matrix with its provenance."""

    matrix: np.ndarray
    d: int
    ell: int

    def to_dict(self):
        return {'d': self.d, 'ell': self.ell, 'matrix': matrix_to_json(self.matrix)}


@dataclass(frozen=True)
class Decryption:
    x_hat: int
    confidence: float
    ambiguous: bool
    p0: float
    p1: float


def encrypt(cfg, x, key):
    """sigma = U_k rho_x U_k^dagger."""
    _check_key(cfg, key)
    u = key_unitary(cfg, key)
    rho = plaintext_state(cfg, x, key.experimental)
    return Ciphertext(matrix=u @ rho @ u.conj().T, d=cfg.d, ell=key.ell)


def _check_key(cfg, key):
    if key.d != cfg.d:
        raise ParameterError(f"Key is for d={key.d}, configuration has d={cfg.d}")


def sign_probabilities(cfg, rho, experimental=False):
    """Q-basis weights of rho summed per sign bit."""
    diag = np.real(np.diag(rho))
    zero, one = sign_masks(cfg, experimental)
    return float(diag[zero].sum()), float(diag[one].sum())


def _guess(p0, p1):
    """Argmax with ties (within TIE_TOLERANCE) resolved to 0."""
    ambiguous = abs(p0 - p1) <= TIE_TOLERANCE
    if ambiguous or p0 > p1:
        return 0, ambiguous
    return 1, ambiguous


def decrypt(cfg, c, key):
    """
    Undo U_k and measure the sign register in the Q basis.

    Returns:
        Decryption: x_hat, winning probability mass and the ambiguity flag
    """
    _check_key(cfg, key)
    if c.d != cfg.d or c.ell != key.ell:
        raise ParameterError(f"Ciphertext (d={c.d}, ell={c.ell}) does not match key (d={key.d}, ell={key.ell})")
    validate_density_matrix(c.matrix, "ciphertext")
    u = key_unitary(cfg, key)
    rho = u.conj().T @ c.matrix @ u
    p0, p1 = sign_probabilities(cfg, rho, key.experimental)
    x_hat, ambiguous = _guess(p0, p1)
    if ambiguous:
        logger.warning(f"Ambiguous decryption: p0={p0:.15f}, p1={p1:.15f}")
    return Decryption(x_hat=x_hat, confidence=p0 if x_hat == 0 else p1, ambiguous=ambiguous, p0=p0, p1=p1)


# ============================================================================
# Key-averaged ciphertexts
# ============================================================================

class AverageMode(Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


def avg_ciphertext(cfg, x, ell, mode=AverageMode.EXACT, n_samples=None, seed=0, threads=None):
    """
    Ciphertext averaged over the key.

    EXACT applies the one-fold Q, P, Q dephasing of every round to rho_x
    (the result is I / d for ell >= 1). MONTE_CARLO averages encrypt over
    n_samples sampled keys.
    """
    mode = AverageMode(mode)
    ell = require_positive_int(ell, "ell")
    rho = plaintext_state(cfg, x)

    if mode is AverageMode.EXACT:
        for _ in range(ell):
            for basis in (Basis.Q, Basis.P, Basis.Q):
                rho = exact_single_twirl(cfg, basis, rho)
        return rho

    n_samples = require_positive_int(n_samples, "n_samples")
    seed = require_seed(seed)

    def chunk_sum(chunk):
        u = batch_key_unitaries(cfg, _key_draws(cfg, ell, chunk, seed, False), ell)
        return np.einsum('sij,jk,slk->il', u, rho, u.conj(), optimize=True)

    return chunked_sum(chunk_sum, split_chunks(n_samples, MC_CHUNK_SIZE), threads) / n_samples


# ============================================================================
# Security bound
# ============================================================================

def _log_prefactor(d, log_base):
    if d < 4:
        raise DomainError(f"The unclonability bound needs d >= 4 (log log d > 0), got d={d}")
    log_d = np.log(float(d)) / np.log(log_base)
    return 3.0 * (np.log(log_d) / np.log(log_base)) / (2.0 * log_d)


def delta_bound(d, ell, log_base=DELTA_LOG_BASE):
    """
    delta = (3 log log d / (2 log d)) sqrt(1 + 4 d^(5 - ell)), logarithms in
    `log_base` (2 by default).

    Raises:
        DomainError: d < 4
        ParameterError: ell < 1
    """
    ell = require_positive_int(ell, "ell")
    value = _log_prefactor(d, log_base) * np.sqrt(1.0 + 4.0 * float(d) ** (5 - ell))
    if ell < SMALL_DELTA_MIN_ELL:
        logger.debug(f"delta_bound d={d} ell={ell}: ell < {SMALL_DELTA_MIN_ELL}, bound not small")
    return float(value)


def delta_from_epsilon(d, eps_diamond, log_base=DELTA_LOG_BASE):
    """
    delta = (3 log log d / (2 log d)) sqrt(1 + 4 d^4 eps) for a design with
    diamond-norm accuracy eps; delta_bound(d, ell) uses eps = d * d^-ell.
    """
    if eps_diamond < 0:
        raise DomainError(f"eps must be non-negative, got {eps_diamond}")
    return float(_log_prefactor(d, log_base) * np.sqrt(1.0 + 4.0 * float(d) ** 4 * eps_diamond))


def delta_report(d, ell, log_base=DELTA_LOG_BASE):
    """delta_bound with its metadata flags."""
    return {
        'd': int(d),
        'ell': int(ell),
        'delta_bound': delta_bound(d, ell, log_base),
        'log_base': float(log_base),
        'small_delta_regime': int(ell) >= SMALL_DELTA_MIN_ELL,
    }


# ============================================================================
# Experiments
# ============================================================================

@dataclass
class RoundTripReport:
    correct: int
    total: int
    min_confidence: float
    ambiguous: int
    delta_bound: float = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            'correct': self.correct,
            'total': self.total,
            'min_confidence': self.min_confidence,
            'ambiguous': self.ambiguous,
            'delta_bound': self.delta_bound,
            **self.extra,
        }


def run_round_trips(cfg, ell, n_round_trips, seed, experimental=False):
    """
    Encrypt random bits under random keys and decrypt with the same key.
    """
    keys = sample_keys(cfg, ell, n_round_trips, seed, experimental)
    bits = integer_block(seed, Chunk(0, 0, len(keys)), 1, 0, 2, Stream.PLAINTEXT)[:, 0]

    correct, ambiguous, min_conf = 0, 0, 1.0
    for key, x in zip(keys, bits):
        result = decrypt(cfg, encrypt(cfg, int(x), key), key)
        correct += int(result.x_hat == x)
        ambiguous += int(result.ambiguous)
        min_conf = min(min_conf, result.confidence)

    bound = delta_bound(cfg.d, ell) if cfg.d >= 4 and not experimental else None
    report = RoundTripReport(correct=correct, total=len(keys), min_confidence=min_conf,
                             ambiguous=ambiguous, delta_bound=bound)
    logger.info(f"Round trips d={cfg.d} ell={ell}: {correct}/{len(keys)} correct, min confidence {min_conf:.12f}")
    return report


def wrong_key_confidence(cfg, ell, n_keys, seed):
    """
    Mean decryption confidence when decrypting with an independent key.
    """
    keys = sample_keys(cfg, ell, n_keys, seed)
    chunk = Chunk(0, 0, n_keys)
    wrong = uniform_block(seed, chunk, PARAMS_PER_ROUND * ell, cfg.d, Stream.WRONG_KEY)
    bits = integer_block(seed, chunk, 1, 0, 2, Stream.PLAINTEXT)[:, 0]
    confidences = [
        decrypt(cfg, encrypt(cfg, int(x), key), QecmKey(ell=ell, params=w, d=cfg.d)).confidence
        for key, w, x in zip(keys, wrong, bits)
    ]
    return float(np.mean(confidences))


@dataclass
class AttackReport:
    d: int
    ell: int
    n_trials: int
    seed: int
    wins: int

    @property
    def win_probability(self):
        return self.wins / self.n_trials

    @property
    def stderr(self):
        p = self.win_probability
        return float(np.sqrt(p * (1.0 - p) / self.n_trials))

    def to_dict(self):
        return {
            'd': self.d,
            'ell': self.ell,
            'n_trials': self.n_trials,
            'seed': self.seed,
            'wins': self.wins,
            'win_probability': self.win_probability,
            'stderr': self.stderr,
        }


def simulate_measure_resend(cfg, ell, n_trials, seed, threads=None):
    """
    Baseline cloning attack: measure the ciphertext in the Q basis and hand
    the outcome j to both parties. After the key is revealed each party
    guesses the sign bit maximising the sign weight of U_k^dagger |j>; the
    trial is won when both guesses equal x (they coincide, sharing j).

    ell = 0 (no encryption) is accepted here only.
    """
    _check_scheme(cfg, False)
    if isinstance(ell, bool) or int(ell) != ell or ell < 0:
        raise ParameterError(f"ell must be a non-negative integer, got {ell!r}")
    ell = int(ell)
    n_trials = require_positive_int(n_trials, "n_trials")
    seed = require_seed(seed)
    zero_mask, one_mask = sign_masks(cfg)
    weights = np.stack([plaintext_weights(cfg, 0), plaintext_weights(cfg, 1)])

    def chunk_wins(chunk):
        x = integer_block(seed, chunk, 1, 0, 2, Stream.PLAINTEXT)[:, 0]
        coin = uniform_block(seed, chunk, 1, 1.0, Stream.MEASUREMENT)[:, 0]
        if ell == 0:
            u = np.broadcast_to(np.eye(cfg.d, dtype=np.complex128), (chunk.size, cfg.d, cfg.d))
        else:
            u = batch_key_unitaries(cfg, _key_draws(cfg, ell, chunk, seed, False), ell)
        amp2 = np.abs(u) ** 2
        # Outcome distribution: diag(U rho_x U^dagger)_j = sum_k |U_jk|^2 w_x[k]
        probs = np.einsum('sjk,sk->sj', amp2, weights[x])
        cdf = np.cumsum(probs, axis=1)
        j = np.minimum((cdf < coin[:, None] * cdf[:, -1:]).sum(axis=1), cfg.d - 1)
        # Sign weights of U^dagger |j>: |U_jk|^2 summed over each sign class
        row = amp2[np.arange(chunk.size), j]
        p0 = row[:, zero_mask].sum(axis=1)
        p1 = row[:, one_mask].sum(axis=1)
        guess = np.where(p1 - p0 > TIE_TOLERANCE, 1, 0)
        return int(np.sum(guess == x))

    wins = chunked_sum(chunk_wins, split_chunks(n_trials, MC_CHUNK_SIZE), threads)
    report = AttackReport(d=cfg.d, ell=ell, n_trials=n_trials, seed=seed, wins=int(wins))
    logger.info(f"Measure-resend d={cfg.d} ell={ell}: win probability {report.win_probability:.6f}")
    return report
