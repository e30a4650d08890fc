"""Exceptions for the inference app."""

from typing import ClassVar

from factormix.common.exceptions import FactorMixError


class BootstrapFailureError(FactorMixError):
    """Raised when too many bootstrap refits failed."""

    exit_code: ClassVar[int] = 3

    def __init__(self, n_failed: int, n_total: int) -> None:
        """Initialize BootstrapFailureError.

        Args:
            n_failed: Replicates whose refit failed.
            n_total: Replicates drawn.
        """
        self.n_failed = n_failed
        self.n_total = n_total
        super().__init__(
            f'Bootstrap failed: {n_failed} of {n_total} refits failed, '
            'more than half',
        )
