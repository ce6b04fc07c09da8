"""
Wavefunctions Module
Single-mode test states in the q-representation: vacuum, Fock states
(Hermite functions) and coherent states, plus density kernels built from them.
"""

from dataclasses import dataclass
from math import factorial
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.special import eval_hermite

from core.errors import ParameterError
from utils.logger import get_logger

logger = get_logger(module_name="wavefunctions")

MAX_FOCK_N = 4
DERIVATIVE_STEP = 1e-5


@dataclass(frozen=True)
class Wavefunction:
    """
    psi(q) with an optional analytic <p^2> and derivative.

    evaluate: vectorized q -> complex amplitude
    mean_psq: <p^2> when known analytically (energy units, hbar = 1)
    derivative: vectorized q -> d psi / dq, when known
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    label: str
    mean_psq: Optional[float] = None
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, q):
        return self.evaluate(np.asarray(q, dtype=np.float64))

    def d_dq(self, q):
        """Derivative, analytic when available, else a central difference."""
        q = np.asarray(q, dtype=np.float64)
        if self.derivative is not None:
            return self.derivative(q)
        h = DERIVATIVE_STEP
        return (self.evaluate(q + h) - self.evaluate(q - h)) / (2.0 * h)


def _hermite_function(n):
    norm = 1.0 / np.sqrt((2.0 ** n) * factorial(n) * np.sqrt(np.pi))

    def psi(q):
        q = np.asarray(q, dtype=np.float64)
        return (norm * eval_hermite(n, q) * np.exp(-0.5 * q * q)).astype(np.complex128)

    return psi


def vacuum():
    """Ground state pi^{-1/4} exp(-q^2 / 2), <p^2> = 1/2."""
    return fock(0)


def fock(n):
    """
    Fock state |n> as a Hermite function, <p^2> = n + 1/2.

    Raises:
        ParameterError: n outside 0..4
    """
    if isinstance(n, bool) or int(n) != n or not 0 <= n <= MAX_FOCK_N:
        raise ParameterError(f"Fock index must be an integer in 0..{MAX_FOCK_N}, got {n!r}")
    n = int(n)
    psi_n = _hermite_function(n)
    psi_up = _hermite_function(n + 1)
    psi_down = _hermite_function(n - 1) if n > 0 else None

    def derivative(q):
        # psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}
        out = -np.sqrt((n + 1) / 2.0) * psi_up(q)
        if psi_down is not None:
            out = out + np.sqrt(n / 2.0) * psi_down(q)
        return out

    label = "vacuum" if n == 0 else f"fock_{n}"
    return Wavefunction(evaluate=psi_n, label=label, mean_psq=n + 0.5, derivative=derivative)


def coherent(alpha):
    """
    Coherent state |alpha>, alpha = (q0 + i p0) / sqrt(2):
    psi(q) = pi^{-1/4} exp(-(q - q0)^2 / 2 + i p0 q - i p0 q0 / 2), <p^2> = p0^2 + 1/2.
    """
    alpha = complex(alpha)
    q0 = np.sqrt(2.0) * alpha.real
    p0 = np.sqrt(2.0) * alpha.imag
    norm = np.pi ** -0.25

    def psi(q):
        q = np.asarray(q, dtype=np.float64)
        return norm * np.exp(-0.5 * (q - q0) ** 2 + 1j * p0 * q - 0.5j * p0 * q0)

    def derivative(q):
        q = np.asarray(q, dtype=np.float64)
        return (-(q - q0) + 1j * p0) * psi(q)

    return Wavefunction(
        evaluate=psi,
        label=f"coherent({alpha.real:g}{alpha.imag:+g}j)",
        mean_psq=float(p0 * p0 + 0.5),
        derivative=derivative,
    )


def state_by_name(name):
    """
    Look up a test state: 'vacuum', 'fock1'..'fock4', 'coherent' (alpha = 1).

    Raises:
        ParameterError: Unknown name
    """
    key = str(name).strip().lower().replace('_', '').replace('-', '')
    if key in ('vacuum', 'fock0'):
        return vacuum()
    if key.startswith('fock') and key[4:].isdigit():
        return fock(int(key[4:]))
    if key == 'coherent':
        return coherent(1.0)
    raise ParameterError(f"Unknown test state '{name}'")


# ============================================================================
# Quadrature helpers
# ============================================================================

def _quad_abs2(f, lo, hi):
    value, _ = integrate.quad(lambda q: float(np.abs(f(q)) ** 2), lo, hi,
                              epsabs=1e-12, epsrel=1e-12, limit=400)
    return value


def norm_squared(psi, lo, hi):
    """Integral of |psi|^2 over [lo, hi]."""
    return _quad_abs2(psi, lo, hi)


def mean_psq(psi, lo=-40.0, hi=40.0):
    """
    <p^2> = integral |psi'(q)|^2 dq (integration by parts, hbar = 1).
    """
    return _quad_abs2(psi.d_dq, lo, hi)


def resolved_mean_psq(psi):
    """Analytic <p^2> when attached, otherwise by quadrature."""
    if psi.mean_psq is not None:
        return float(psi.mean_psq)
    value = mean_psq(psi)
    logger.debug(f"<p^2> of {psi.label} by quadrature: {value:.12f}")
    return value


# ============================================================================
# Density kernels
# ============================================================================

def pure_kernel(psi):
    """rho(q, q') = psi(q) conj(psi(q')) (broadcasting over arrays)."""

    def kernel(q, qp):
        return psi(q) * np.conj(psi(qp))

    return kernel


def mixture_kernel(components):
    """
    Kernel of sum_r w_r |psi_r><psi_r|.

    Args:
        components: iterable of (weight, Wavefunction)

    Raises:
        ParameterError: Negative weights or weights not summing to 1
    """
    components = list(components)
    weights = np.array([w for w, _ in components], dtype=np.float64)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ParameterError(f"Mixture weights must be non-negative and sum to 1, got {weights.tolist()}")

    def kernel(q, qp):
        total = 0.0
        for w, psi in components:
            total = total + w * psi(q) * np.conj(psi(qp))
        return total

    return kernel
