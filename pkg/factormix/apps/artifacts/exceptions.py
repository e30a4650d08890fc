"""Exceptions for the artifacts app."""

from typing import ClassVar

from factormix.common.exceptions import FactorMixError


class DataParseError(FactorMixError):
    """Raised when an input data file cannot be turned into patterns."""

    exit_code: ClassVar[int] = 2

    def __init__(
        self,
        reason: str,
        row: int | None = None,
        column: str | None = None,
    ) -> None:
        """Initialize DataParseError.

        Args:
            reason: What is wrong.
            row: 1-based line of the file, header included.
            column: Name of the offending column.
        """
        self.reason = reason
        self.row = row
        self.column = column
        location = ''
        if row is not None:
            location = f' at line {row}'
        if column is not None:
            location = f'{location}, column {column!r}'
        super().__init__(f'Cannot parse data{location}: {reason}')


class ArtifactParseError(FactorMixError):
    """Raised when a fit artifact is unreadable or incomplete."""

    exit_code: ClassVar[int] = 2

    def __init__(self, path: str, reason: str) -> None:
        """Initialize ArtifactParseError.

        Args:
            path: Artifact location.
            reason: What is wrong.
        """
        self.path = path
        self.reason = reason
        super().__init__(f'Cannot read fit artifact {path}: {reason}')


class ArtifactVersionError(FactorMixError):
    """Raised when an artifact was written in another format version."""

    exit_code: ClassVar[int] = 2

    def __init__(self, found: object, expected: int) -> None:
        """Initialize ArtifactVersionError.

        Args:
            found: Version stored in the artifact.
            expected: Version this code reads.
        """
        self.found = found
        self.expected = expected
        super().__init__(
            f'Unsupported artifact format version {found!r}, '
            f'expected {expected}',
        )
