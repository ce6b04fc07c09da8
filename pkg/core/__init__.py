"""
Core Package
Configuration, errors, the two-copy operator substrate, the box
discretisation grid and the run dispatcher (core.runner, imported directly)
"""

from .discretization import Convention, DiscretizationConfig, make_config
from .errors import (CVDesignError, DegenerateDimensionError, DimensionError, DomainError,
                     NonFiniteOutputError, NumericalIntegrationError, ParameterError, ParityError,
                     PrimalityError, ResourceGuardError, StateOutsideWindowError,
                     SubspaceViolationError, UnsupportedParameterError)
from .opalg import decompose_ak, schatten_norm, trace_distance

__all__ = [
    # Discretisation
    'Convention',
    'DiscretizationConfig',
    'make_config',

    # Errors
    'CVDesignError',
    'DegenerateDimensionError',
    'DimensionError',
    'DomainError',
    'NonFiniteOutputError',
    'NumericalIntegrationError',
    'ParameterError',
    'ParityError',
    'PrimalityError',
    'ResourceGuardError',
    'StateOutsideWindowError',
    'SubspaceViolationError',
    'UnsupportedParameterError',

    # Operator algebra
    'decompose_ak',
    'schatten_norm',
    'trace_distance',
]
