"""Exceptions for the estimation app."""

from collections.abc import Sequence
from typing import ClassVar

from factormix.common.exceptions import (
    FactorMixError,
    NumericalDegeneracyError,
)


class ComponentCollapseError(NumericalDegeneracyError):
    """Raised when a mixture component loses all of its responsibility."""

    def __init__(self, component: int, responsibility: float) -> None:
        """Initialize ComponentCollapseError.

        Args:
            component: 0-based index of the collapsed component.
            responsibility: Its total count-weighted responsibility.
        """
        self.component = component
        self.responsibility = responsibility
        super().__init__(
            f'Component {component + 1} collapsed: total responsibility '
            f'{responsibility:.3g} is below 1e-08',
        )


class InitializationError(FactorMixError):
    """Raised when the single-component pre-fit cannot be computed."""

    exit_code: ClassVar[int] = 3


class FitError(FactorMixError):
    """Raised when every random start of a fit failed."""

    exit_code: ClassVar[int] = 3

    def __init__(self, failures: Sequence[tuple[int, str]]) -> None:
        """Initialize FitError.

        Args:
            failures: ``(start index, reason)`` for every failed start.
        """
        self.failures = tuple(failures)
        reasons = '; '.join(
            f'start {index + 1}: {reason}' for index, reason in self.failures
        )
        super().__init__(
            f'All {len(self.failures)} starts failed ({reasons})',
        )
