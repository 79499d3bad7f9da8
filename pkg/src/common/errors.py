"""
Exception hierarchy for the simulator.

Every error raised by library code derives from MimoSimError so callers (the CLI in
particular) can map failures to exit codes without catching unrelated exceptions.
"""

from pathlib import Path
from typing import Optional, Union


class MimoSimError(Exception):
    """Base class for all simulator errors."""


class InvalidArgumentError(MimoSimError, ValueError):
    """An operation received an argument outside its domain."""


class ConfigurationError(MimoSimError):
    """A system or experiment configuration is inconsistent or malformed."""


class InternalComputationError(MimoSimError, RuntimeError):
    """
    A computation produced a value that is impossible by construction.

    Raised for non-positive SINR denominators, disagreement between the normalized
    and raw SINR assemblies, and imaginary residues of analytically real quantities.
    These always indicate a bug, never bad input.
    """


class OutputError(MimoSimError, OSError):
    """Reading or writing an artifact failed."""

    def __init__(self, message: str, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        if self.path is not None:
            message = f"{message} [{self.path}]"
        super().__init__(message)
