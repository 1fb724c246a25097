"""Exception taxonomy shared across the package.

Every failure mode callers are expected to branch on gets its own class;
plain ValueError is reserved for out-of-range arguments.
"""
from __future__ import annotations


class QhdError(Exception):
    """Base class for domain errors raised by this package."""


class UnsupportedGridError(QhdError):
    """Operation asked to run on a grid kind it does not support."""


class VacuumError(QhdError):
    """Vacuum region encountered where strictly positive density is required."""


class QuantizationError(QhdError):
    """Measured circulation is incompatible with the declared integer winding."""


class NotLiftableError(QhdError):
    """Hydrodynamic data admits no single-valued wave function on this grid."""


class NotPositiveError(QhdError):
    """Density falls below the positivity floor required by the caller."""


class NonconvergenceError(QhdError):
    """Iterative correction failed to reduce its residual."""


class BlowUpError(QhdError):
    """Evolution produced non-finite values and was aborted."""


class MissingInputError(QhdError):
    """A required optional input was not supplied."""


class SizeLimitError(QhdError):
    """Problem size exceeds a hard cost limit of the requested algorithm."""


class ConfigError(QhdError):
    """Scenario configuration is malformed.

    Carries enough position information for a line-precise CLI message.
    """

    def __init__(self, message: str, *, line: int | None = None, key: str | None = None):
        self.line = line
        self.key = key
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if key is not None:
            prefix += f"key '{key}': "
        super().__init__(prefix + message)
