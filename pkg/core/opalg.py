"""
Operator Algebra Module
Dense complex linear algebra on single- and two-copy spaces: Hilbert-Schmidt
inner product, Schatten norms, the structural two-copy operators
(I, F, E, L_u, M_u) and the orthogonal split into span{I, F} (A) and its
complement (K).

Matrices are plain numpy complex128 arrays. Two-copy index (a, b) maps to
row a*d + b, with a, b the positions 0..d-1 of the labels in I_d.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from core.errors import (DegenerateDimensionError, DimensionError,
                         ParameterError, UnsupportedParameterError)
from utils.validation import (require_matrix, require_same_shape,
                              require_square, require_two_copy)

ComplexMatrix = np.ndarray

SUPPORTED_SCHATTEN_P = (1, 2)


# ============================================================================
# Inner products and norms
# ============================================================================

def hs_inner(x, y):
    """
    Hilbert-Schmidt inner product <x, y> = Tr x^dagger y.

    Args:
        x: Matrix
        y: Matrix of the same shape

    Returns:
        complex: The inner product

    Raises:
        DimensionError: On shape mismatch
    """
    a, b = require_same_shape(x, y)
    return complex(np.vdot(a, b))


def schatten_norm(x, p, trace_norm=False, allow_rectangular=False):
    """
    Schatten p-norm (Tr |x|^p)^(1/p) for p in {1, 2}.

    p = 2 is the Frobenius norm; p = 1 sums the singular values.
    With trace_norm=True the result is halved (||x||_tr = ||x||_1 / 2).

    Args:
        x: Matrix (square unless allow_rectangular)
        p: 1 or 2
        trace_norm (bool): Return half the value
        allow_rectangular (bool): Accept non-square input

    Returns:
        float: The norm

    Raises:
        DimensionError: Non-square input without allow_rectangular
        UnsupportedParameterError: p outside {1, 2}
    """
    m = require_matrix(x) if allow_rectangular else require_square(x)
    if p not in SUPPORTED_SCHATTEN_P:
        raise UnsupportedParameterError(f"Schatten p={p} not supported; use one of {SUPPORTED_SCHATTEN_P}")

    if p == 2:
        value = float(np.linalg.norm(m, 'fro'))
    else:
        value = float(np.sum(np.linalg.svd(m, compute_uv=False)))

    return 0.5 * value if trace_norm else value


def trace_norm(x):
    """||x||_tr = ||x||_1 / 2."""
    return schatten_norm(x, 1, trace_norm=True)


def trace_distance(rho, sigma):
    """
    Trace distance ||rho - sigma||_tr between two states.

    Returns:
        float: Half the Schatten-1 norm of the difference
    """
    a, b = require_same_shape(rho, sigma)
    return trace_norm(a - b)


def operator_norm(x):
    """Largest singular value (2->2 norm of a matrix as a linear map)."""
    m = require_matrix(x)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def diamond_bound_from_2to2(norm_2to2, d):
    """
    Upper bound on the diamond norm of a map on d x d matrices from its
    2->2 norm: ||Phi||_diamond <= d ||Phi||_{2->2}.

    Raises:
        ParameterError: Negative norm or d < 1
    """
    if norm_2to2 < 0:
        raise ParameterError(f"2->2 norm must be non-negative, got {norm_2to2}")
    if d < 1:
        raise ParameterError(f"d must be positive, got {d}")
    return float(d * norm_2to2)


# ============================================================================
# Structural two-copy operators
# ============================================================================

class PairKind(Enum):
    IDENTITY = "identity"
    SWAP = "swap"
    DIAG_PROJECTOR = "diag_projector"
    LADDER_DIAG = "ladder_diag"
    LADDER_SWAP = "ladder_swap"


LADDER_KINDS = (PairKind.LADDER_DIAG, PairKind.LADDER_SWAP)


@dataclass(frozen=True)
class PairBasisOperator:
    """
    Symbolic structural operator on H_d (x) H_d.

    kind: which operator
    d: single-copy dimension
    u: label offset (ladder kinds only); a + u is taken modulo d and mapped
       back into I_d, which on positions is (pos + u) mod d
    """

    kind: PairKind
    d: int
    u: int = None

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError(f"d must be positive, got {self.d}")
        if self.kind in LADDER_KINDS:
            if self.u is None or self.u % self.d == 0:
                raise ParameterError(f"Ladder offset u must be non-zero modulo d={self.d}, got {self.u}")
        elif self.u is not None:
            raise ParameterError(f"{self.kind.value} takes no offset")

    def materialize(self):
        """
        Dense d^2 x d^2 matrix of the operator.

        Returns:
            np.ndarray: complex128 matrix
        """
        d = self.d
        out = np.zeros((d * d, d * d), dtype=np.complex128)
        a = np.arange(d)

        if self.kind is PairKind.IDENTITY:
            np.fill_diagonal(out, 1.0)
        elif self.kind is PairKind.SWAP:
            b = np.arange(d)
            aa, bb = np.meshgrid(a, b, indexing='ij')
            out[(aa * d + bb).ravel(), (bb * d + aa).ravel()] = 1.0
        elif self.kind is PairKind.DIAG_PROJECTOR:
            idx = a * d + a
            out[idx, idx] = 1.0
        elif self.kind is PairKind.LADDER_DIAG:
            shifted = (a + self.u) % d
            idx = a * d + shifted
            out[idx, idx] = 1.0
        else:
            shifted = (a + self.u) % d
            out[a * d + shifted, shifted * d + a] = 1.0
        return out


def identity_operator(d):
    """I on the two-copy space."""
    return PairBasisOperator(PairKind.IDENTITY, d).materialize()


def swap_operator(d):
    """F = sum_ab |ab><ba|."""
    return PairBasisOperator(PairKind.SWAP, d).materialize()


def diag_projector(d):
    """E = sum_a |aa><aa|."""
    return PairBasisOperator(PairKind.DIAG_PROJECTOR, d).materialize()


def ladder_diag(d, u):
    """L_u = sum_a |a, a+u><a, a+u|."""
    return PairBasisOperator(PairKind.LADDER_DIAG, d, u).materialize()


def ladder_swap(d, u):
    """M_u = sum_a |a, a+u><a+u, a|."""
    return PairBasisOperator(PairKind.LADDER_SWAP, d, u).materialize()


def swap_trace(x, d):
    """
    Tr F x without materializing F.

    Tr F x = sum_ab x[(b,a),(a,b)].
    """
    m = require_two_copy(x, d)
    t = m.reshape(d, d, d, d)
    return complex(np.einsum('baab->', t))


# ============================================================================
# A / K decomposition
# ============================================================================

@dataclass(frozen=True)
class AKDecomposition:
    """x = a_coeff * I + f_coeff * F + k_part, with k_part orthogonal to I and F."""

    a_coeff: complex
    f_coeff: complex
    k_part: np.ndarray
    d: int

    def a_part(self):
        """The span{I, F} component as a dense matrix."""
        return self.a_coeff * identity_operator(self.d) + self.f_coeff * swap_operator(self.d)

    def a_norm(self):
        """Frobenius norm of the span{I, F} component (analytic)."""
        d = self.d
        a, f = self.a_coeff, self.f_coeff
        # ||aI + fF||^2 = d^2 |a|^2 + d^2 |f|^2 + 2 d Re(conj(a) f)
        sq = d * d * (abs(a) ** 2 + abs(f) ** 2) + 2.0 * d * (np.conj(a) * f).real
        return float(np.sqrt(max(sq, 0.0)))


def decompose_ak(x, d):
    """
    Split a two-copy operator into its span{I, F} and K components.

    Solves the Gram system
        [d^2  d ] [a]   [Tr x  ]
        [d   d^2] [f] = [Tr F x]
    which follows from <I,I> = <F,F> = d^2 and <I,F> = d.

    Args:
        x: d^2 x d^2 matrix
        d (int): Single-copy dimension, d >= 2

    Returns:
        AKDecomposition: Coefficients and the K-component

    Raises:
        DegenerateDimensionError: d < 2 (F = I, singular Gram matrix)
        DimensionError: x is not d^2 x d^2
    """
    if d < 2:
        raise DegenerateDimensionError(f"A/K decomposition needs d >= 2, got d={d}")
    m = require_two_copy(x, d)

    tr_x = complex(np.trace(m))
    tr_fx = swap_trace(m, d)

    gram = np.array([[d * d, d], [d, d * d]], dtype=np.complex128)
    a_coeff, f_coeff = np.linalg.solve(gram, np.array([tr_x, tr_fx]))

    k_part = m - a_coeff * identity_operator(d) - f_coeff * swap_operator(d)
    return AKDecomposition(complex(a_coeff), complex(f_coeff), k_part, d)


def project_to_k(x, d):
    """K-component of x."""
    return decompose_ak(x, d).k_part


def haar_double_twirl(x, d):
    """
    Analytic Haar two-fold twirl: the span{I, F} component of x.

    Every two-fold twirl fixes I and F; the Haar twirl additionally kills K.
    """
    return decompose_ak(x, d).a_part()


# ============================================================================
# JSON interchange
# ============================================================================

def matrix_to_json(x):
    """
    Serialize a matrix as {"rows", "cols", "re", "im"} (row-major).

    Returns:
        dict: JSON-ready mapping
    """
    m = require_matrix(x)
    flat = m.ravel(order='C')
    return {
        'rows': int(m.shape[0]),
        'cols': int(m.shape[1]),
        're': [float(v) for v in flat.real],
        'im': [float(v) for v in flat.imag],
    }


def matrix_from_json(doc):
    """
    Parse the {"rows", "cols", "re", "im"} format.

    Raises:
        DimensionError: If the entry count does not equal rows * cols
    """
    try:
        rows, cols = int(doc['rows']), int(doc['cols'])
        re, im = doc['re'], doc['im']
    except (KeyError, TypeError, ValueError) as e:
        raise DimensionError(f"Malformed matrix document: {e}") from e

    if rows < 1 or cols < 1:
        raise DimensionError(f"Matrix dimensions must be positive, got {rows}x{cols}")
    if len(re) != rows * cols or len(im) != rows * cols:
        raise DimensionError(
            f"Matrix document has {len(re)} real / {len(im)} imaginary entries, expected {rows * cols}"
        )
    values = np.asarray(re, dtype=np.float64) + 1j * np.asarray(im, dtype=np.float64)
    return values.reshape(rows, cols)
