"""
Discretization Module
The d-dimensional box-ket space: index conventions, box geometry, the
discrete Fourier transform between Q and P box bases and the scaled
quadrature operators Q and P.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from core.errors import ParameterError, ParityError


class Convention(Enum):
    EVEN_CENTERED = "even_centered"
    ODD_CENTERED = "odd_centered"


def parse_convention(value):
    """
    Accept a Convention or its string name ('even_centered' / 'odd_centered',
    also 'even' / 'odd').

    Raises:
        ParameterError: Unknown name
    """
    if isinstance(value, Convention):
        return value
    key = str(value).strip().lower().replace('-', '_')
    aliases = {'even': 'even_centered', 'odd': 'odd_centered'}
    key = aliases.get(key, key)
    try:
        return Convention(key)
    except ValueError as e:
        raise ParameterError(f"Unknown index convention '{value}'") from e


@dataclass(frozen=True)
class DiscretizationConfig:
    """
    Box discretisation of one CV mode.

    EVEN_CENTERED: d even, I_d = {-d/2, ..., d/2 - 1}, box i = [i*delta, (i+1)*delta)
    ODD_CENTERED:  d odd,  I_d = {-(d-1)/2, ..., (d-1)/2}, box i centred on i*delta
    """

    d: int
    convention: Convention = Convention.EVEN_CENTERED

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"d must be a positive integer, got {self.d!r}")
        object.__setattr__(self, 'convention', parse_convention(self.convention))
        if self.convention is Convention.EVEN_CENTERED and self.d % 2 != 0:
            raise ParityError(f"Even-centered convention requires even d, got d={self.d}")
        if self.convention is Convention.ODD_CENTERED and self.d % 2 != 1:
            raise ParityError(f"Odd-centered convention requires odd d, got d={self.d}")

    @property
    def delta(self):
        """Box width sqrt(2 pi / d)."""
        return float(np.sqrt(2.0 * np.pi / self.d))

    @property
    def q_max(self):
        """Half-width of the window, sqrt(pi d / 2) = d * delta / 2."""
        return float(np.sqrt(np.pi * self.d / 2.0))

    @property
    def omega(self):
        """Primitive d-th root of unity exp(2 pi i / d)."""
        return complex(np.exp(2j * np.pi / self.d))

    @property
    def min_label(self):
        if self.convention is Convention.EVEN_CENTERED:
            return -(self.d // 2)
        return -((self.d - 1) // 2)

    @cached_property
    def labels(self):
        """Index set I_d in ascending order (position p holds label min_label + p)."""
        return np.arange(self.min_label, self.min_label + self.d, dtype=np.int64)

    def position(self, label):
        """
        Position 0..d-1 of a label; any integer is first reduced modulo d
        into I_d.
        """
        return int((int(label) - self.min_label) % self.d)

    def reduce_label(self, value):
        """Reduce an integer modulo d into I_d."""
        return int(self.labels[self.position(value)])

    def box_bounds(self, label):
        """
        Interval [lo, hi) of the box with the given label (q-units).
        """
        i = int(label)
        if self.convention is Convention.EVEN_CENTERED:
            return i * self.delta, (i + 1) * self.delta
        return (i - 0.5) * self.delta, (i + 0.5) * self.delta

    def box_edges(self):
        """All d + 1 box edges, from -q_max to q_max."""
        lo = self.box_bounds(self.labels[0])[0]
        return lo + self.delta * np.arange(self.d + 1)

    def box_label_of(self, q):
        """
        Label of the box containing each q (no range check).

        Args:
            q: scalar or array of positions

        Returns:
            np.ndarray: integer labels
        """
        q = np.asarray(q, dtype=np.float64)
        if self.convention is Convention.EVEN_CENTERED:
            return np.floor(q / self.delta).astype(np.int64)
        return np.floor(q / self.delta + 0.5).astype(np.int64)

    def to_dict(self):
        return {
            'd': self.d,
            'convention': self.convention.value,
            'delta': self.delta,
            'q_max': self.q_max,
        }


def make_config(d, convention=None):
    """
    Build a DiscretizationConfig, picking the convention from the parity of d
    when none is given.
    """
    if convention is None:
        convention = Convention.EVEN_CENTERED if int(d) % 2 == 0 else Convention.ODD_CENTERED
    return DiscretizationConfig(int(d), parse_convention(convention))


# ============================================================================
# Quadrature operators
# ============================================================================

@dataclass(frozen=True)
class QuadratureOperators:
    """Q (diagonal label operator), P = F Q F^dagger and the DFT matrix F."""

    q_op: np.ndarray
    p_op: np.ndarray
    f_dft: np.ndarray


def dft_matrix(cfg):
    """
    DFT between the box bases: column k holds |k~> = d^{-1/2} sum_j omega^{kj} |j>,
    with j, k running over the labels I_d.

    Returns:
        np.ndarray: d x d unitary
    """
    labels = cfg.labels
    # exponent reduced mod d keeps the phases exact for large labels
    exponent = np.mod(np.outer(labels, labels), cfg.d).astype(np.float64)
    return np.exp(2j * np.pi * exponent / cfg.d) / np.sqrt(cfg.d)


def quadrature_operators(cfg):
    """
    Scaled quadrature operators of the box space.

    Returns:
        QuadratureOperators: q_op, p_op and f_dft
    """
    f = dft_matrix(cfg)
    q_op = np.diag(cfg.labels.astype(np.complex128))
    p_op = f @ q_op @ f.conj().T
    return QuadratureOperators(q_op=q_op, p_op=p_op, f_dft=f)


def projected_position(cfg):
    """
    Projection of the CV position operator onto the box space, Pi q Pi^dagger.

    Even-centered boxes [i delta, (i+1) delta) average to (i + 1/2) delta;
    odd-centered boxes are centred on i delta.

    Returns:
        np.ndarray: d x d real diagonal matrix (as complex128)
    """
    centres = cfg.labels.astype(np.float64) * cfg.delta
    if cfg.convention is Convention.EVEN_CENTERED:
        centres = centres + 0.5 * cfg.delta
    return np.diag(centres.astype(np.complex128))
