"""
Common Module - errors, numeric guards and logging setup shared by all packages.
"""

from .errors import (
    MimoSimError,
    InvalidArgumentError,
    ConfigurationError,
    InternalComputationError,
    OutputError,
)
from .logging_setup import configure_logging
from .numerics import real_part, hermitian_residual, assert_hermitian

__all__ = [
    'MimoSimError',
    'InvalidArgumentError',
    'ConfigurationError',
    'InternalComputationError',
    'OutputError',
    'configure_logging',
    'real_part',
    'hermitian_residual',
    'assert_hermitian',
]
