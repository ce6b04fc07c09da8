"""
Errors Module
Exception hierarchy shared by every package module.
Each error carries the CLI exit code it maps to.
"""

EXIT_OK = 0
EXIT_ACCEPTANCE_FAILURE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class CVDesignError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = EXIT_USAGE
    kind = "error"

    def to_dict(self):
        """Machine-readable form used for the CLI error JSON."""
        return {'error': self.kind, 'message': str(self), 'exit_code': self.exit_code}


class DimensionError(CVDesignError, ValueError):
    """Shape mismatch or non-square input."""
    kind = "dimension_error"


class UnsupportedParameterError(CVDesignError, ValueError):
    """Parameter outside the supported set (e.g. Schatten p not in {1, 2})."""
    kind = "unsupported_parameter"


class DegenerateDimensionError(CVDesignError, ValueError):
    """d < 2: I and F coincide and the Gram system is singular."""
    kind = "degenerate_dimension"


class ParameterError(CVDesignError, ValueError):
    """Invalid scalar parameter (counts, ranges, conventions)."""
    kind = "parameter_error"


class DomainError(CVDesignError, ValueError):
    """Argument outside the domain of a formula."""
    kind = "domain_error"


class ParityError(CVDesignError, ValueError):
    """Dimension parity does not match the requested convention or scheme."""
    kind = "parity_error"


class PrimalityError(CVDesignError, ValueError):
    """Integer-parameter mode requested with a composite dimension."""
    kind = "primality_error"


class SubspaceViolationError(CVDesignError, ValueError):
    """Input expected in K has a non-negligible A-component."""
    kind = "subspace_violation"


class ResourceGuardError(CVDesignError, ValueError):
    """Computation refused because of its memory footprint."""
    kind = "resource_guard"


class NumericalIntegrationError(CVDesignError, ArithmeticError):
    """Quadrature estimates disagree between refinement levels."""
    exit_code = EXIT_NUMERICAL
    kind = "numerical_integration"


class StateOutsideWindowError(CVDesignError, ArithmeticError):
    """Almost no probability mass of the state lies inside the window."""
    exit_code = EXIT_NUMERICAL
    kind = "state_outside_window"


class NonFiniteOutputError(CVDesignError, ArithmeticError):
    """A NaN or Inf reached an output document."""
    exit_code = EXIT_NUMERICAL
    kind = "non_finite_output"
