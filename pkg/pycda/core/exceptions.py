"""
Exceptions raised by pycda.

Every error the library raises on purpose derives from CdaError, so callers
(and the CLI) can tell a bad experiment apart from a programming error.
"""


class CdaError(Exception):
    """Base class for all pycda errors."""


class ParameterError(CdaError, ValueError):
    """A parameter or precondition was violated."""


class SolverError(CdaError, RuntimeError):
    """A linear solve or iterative method failed."""


class EmptySampleError(CdaError, ValueError):
    """An operation needed at least one observation and got none."""
