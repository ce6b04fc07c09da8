"""
Validation Utilities Module
Handles shape checks, density-matrix checks and integer parameter checks
"""

import numpy as np

from core.config import HERMITIAN_TOLERANCE, PSD_TOLERANCE, TRACE_TOLERANCE
from core.errors import DimensionError, ParameterError


def require_matrix(x, name="matrix"):
    """
    Coerce a value to a 2-D complex128 array.

    Args:
        x: Array-like input
        name (str): Name used in error messages

    Returns:
        np.ndarray: The complex matrix

    Raises:
        DimensionError: If the input is not two-dimensional
    """
    m = np.asarray(x, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {m.shape}")
    return m


def require_square(x, name="matrix"):
    """
    Validates that a matrix is square.

    Args:
        x: Array-like input
        name (str): Name used in error messages

    Returns:
        np.ndarray: The complex matrix

    Raises:
        DimensionError: If the matrix is not square
    """
    m = require_matrix(x, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")
    return m


def require_same_shape(x, y):
    """
    Validates that two matrices have the same shape.

    Returns:
        tuple: (x, y) as complex matrices

    Raises:
        DimensionError: On shape mismatch
    """
    a = require_matrix(x, "x")
    b = require_matrix(y, "y")
    if a.shape != b.shape:
        raise DimensionError(f"Shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def require_two_copy(x, d):
    """
    Validates that a matrix acts on the two-copy space of dimension d.

    Raises:
        DimensionError: If x is not d^2 x d^2
    """
    m = require_square(x, "two-copy operator")
    if m.shape[0] != d * d:
        raise DimensionError(f"Expected a {d * d}x{d * d} two-copy operator, got {m.shape}")
    return m


def density_matrix_report(rho):
    """
    Measures the three density-matrix properties.

    Args:
        rho: Square matrix

    Returns:
        dict: hermiticity_error, min_eigenvalue, trace_error and is_valid
    """
    m = require_square(rho, "density matrix")
    hermiticity_error = float(np.max(np.abs(m - m.conj().T)))
    herm = 0.5 * (m + m.conj().T)
    min_eigenvalue = float(np.min(np.linalg.eigvalsh(herm)))
    trace_error = float(abs(np.trace(m) - 1.0))

    is_valid = (
        hermiticity_error <= HERMITIAN_TOLERANCE
        and min_eigenvalue >= -PSD_TOLERANCE
        and trace_error <= TRACE_TOLERANCE
    )
    return {
        'hermiticity_error': hermiticity_error,
        'min_eigenvalue': min_eigenvalue,
        'trace_error': trace_error,
        'is_valid': is_valid,
    }


def validate_density_matrix(rho, name="density matrix"):
    """
    Validates Hermiticity, positive semidefiniteness and unit trace.

    Raises:
        ParameterError: If any of the three checks fails
    """
    report = density_matrix_report(rho)
    if not report['is_valid']:
        raise ParameterError(
            f"{name} is not a valid density matrix: "
            f"hermiticity error {report['hermiticity_error']:.3e}, "
            f"min eigenvalue {report['min_eigenvalue']:.3e}, "
            f"trace error {report['trace_error']:.3e}"
        )
    return True


def is_prime(n):
    """
    Trial-division primality test (dimensions here are small).

    Examples:
        >>> is_prime(7)
        True
        >>> is_prime(9)
        False
    """
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def require_positive_int(value, name):
    """
    Validates a strictly positive integer parameter.

    Raises:
        ParameterError: If value is not an integer >= 1
    """
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def require_bit(value, name="x"):
    """Validates a plaintext bit."""
    if value not in (0, 1):
        raise ParameterError(f"{name} must be 0 or 1, got {value!r}")
    return int(value)
