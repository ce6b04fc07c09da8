"""
Utils Package
Logging, validation, seeded random streams, deterministic parallel
reduction and output formatting
"""

from .formatters import format_pass_fail, to_json_safe
from .logger import (DesignLogger, critical, debug, error, get_logger, info, log_header,
                     log_separator, warning)
from .parallel import chunked_sum, pairwise_sum
from .rng import Stream, chunk_generator, split_chunks
from .validation import is_prime, require_square, validate_density_matrix

__all__ = [
    # Formatting
    'format_pass_fail',
    'to_json_safe',

    # Logging utilities
    'DesignLogger',
    'get_logger',
    'debug',
    'info',
    'warning',
    'error',
    'critical',
    'log_header',
    'log_separator',

    # Random streams and reduction
    'Stream',
    'chunk_generator',
    'split_chunks',
    'chunked_sum',
    'pairwise_sum',

    # Validation
    'is_prime',
    'require_square',
    'validate_density_matrix',
]
