"""Exceptions for the selection app."""

from collections.abc import Sequence
from typing import TYPE_CHECKING, ClassVar

from factormix.common.exceptions import FactorMixError

if TYPE_CHECKING:
    from factormix.apps.selection.models import CandidateRecord


class SelectionFailedError(FactorMixError):
    """Raised when no factor count passes the bivariate residual screen."""

    exit_code: ClassVar[int] = 4

    def __init__(
        self,
        trace: Sequence['CandidateRecord'],
        q_max: int,
        threshold: float,
    ) -> None:
        """Initialize SelectionFailedError.

        Args:
            trace: Every candidate visited before giving up.
            q_max: Largest factor count that was tried.
            threshold: Residual threshold of the screen.
        """
        self.trace = tuple(trace)
        self.q_max = q_max
        self.threshold = threshold
        super().__init__(
            f'No model with q <= {q_max} keeps every bivariate residual '
            f'below {threshold:g} ({len(self.trace)} candidates tried)',
        )
