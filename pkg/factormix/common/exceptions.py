"""Exceptions shared by every factormix app."""

from typing import ClassVar


class FactorMixError(Exception):
    """Base class for all errors raised by factormix.

    ``exit_code`` is the process exit status the command line uses
    when the error escapes a management command.
    """

    exit_code: ClassVar[int] = 1


class InvalidArgumentError(FactorMixError, ValueError):
    """Raised when an argument violates an operation precondition."""


class ResourceLimitError(FactorMixError):
    """Raised when a request would exceed a hard computational limit."""

    def __init__(self, resource: str, requested: int, limit: int) -> None:
        """Initialize ResourceLimitError.

        Args:
            resource: What would grow too large.
            requested: Requested size.
            limit: Largest size allowed.
        """
        self.resource = resource
        self.requested = requested
        self.limit = limit
        super().__init__(
            f'{resource} of size {requested} exceeds the limit of {limit}',
        )


class NumericalDegeneracyError(FactorMixError):
    """Raised when a computation meets a singular or non-finite quantity."""

    exit_code: ClassVar[int] = 3
