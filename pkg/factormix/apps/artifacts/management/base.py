"""Base class, exit codes and shared options of the factormix commands."""

import enum
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn, override

from django.conf import settings
from django.core.management.base import (
    BaseCommand,
    CommandError,
    CommandParser,
)
from django.utils import timezone

from factormix.apps.estimation.models import FitConfig
from factormix.common.exceptions import FactorMixError

logger = logging.getLogger(__name__)


class ExitCode(enum.IntEnum):
    """Process exit status of a command."""

    SUCCESS = 0
    USAGE = 1
    DATA = 2
    NUMERICAL = 3
    SELECTION = 4


def _usage_exit(status: int = 0, message: str | None = None) -> NoReturn:
    if message:
        sys.stderr.write(message)
    sys.exit(ExitCode.USAGE if status else ExitCode.SUCCESS)


def now() -> str:
    """Current time as an ISO 8601 string."""
    return timezone.now().isoformat()


class FactorMixCommand(BaseCommand):
    """Command that maps factormix errors onto exit codes.

    Subclasses implement :meth:`run` instead of ``handle``.
    """

    requires_system_checks = ()

    @override
    def create_parser(
        self,
        prog_name: str,
        subcommand: str,
        **kwargs: Any,
    ) -> CommandParser:
        """Create the parser; bad usage exits with status 1.

        Args:
            prog_name: Program name.
            subcommand: Command name.
            kwargs: Passed on to the parser.

        Returns:
            Parser of the command.
        """
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.exit = _usage_exit  # type: ignore[method-assign, assignment]
        parser.add_argument(
            '--report',
            type=Path,
            default=None,
            help='Also write the printed report to this file',
        )
        return parser

    @override
    def handle(self, *args: Any, **options: Any) -> None:
        """Run the command and translate domain errors.

        Args:
            args: Positional arguments (unused).
            options: Command options.

        Raises:
            CommandError: With the exit code of the domain error.
        """
        try:
            self.run(**options)
        except FactorMixError as error:
            logger.error('%s failed: %s', type(self).__module__, error)
            raise CommandError(
                str(error), returncode=error.exit_code,
            ) from error

    def run(self, **options: Any) -> None:
        """Command body.

        Args:
            options: Command options.
        """
        raise NotImplementedError

    def emit(self, report: str, options: dict[str, Any]) -> None:
        """Print ``report`` and write it to ``--report`` when given.

        Args:
            report: Report text.
            options: Command options.
        """
        self.stdout.write(report)
        if options.get('report') is not None:
            options['report'].write_text(f'{report}\n', encoding='utf-8')


def add_fit_arguments(parser: CommandParser) -> None:
    """Options shared by every command that fits models.

    Defaults come from the ``FACTORMIX_*`` settings.
    """
    parser.add_argument(
        '--quad-points',
        type=int,
        default=settings.FACTORMIX_QUAD_POINTS,
        help='Gauss-Hermite points per factor',
    )
    parser.add_argument(
        '--epsilon',
        type=float,
        default=settings.FACTORMIX_EPSILON,
        help='Log-likelihood change that stops the iterations',
    )
    parser.add_argument(
        '--max-iter',
        type=int,
        default=settings.FACTORMIX_MAX_ITER,
        help='Largest number of iterations',
    )
    parser.add_argument(
        '--newton-max',
        type=int,
        default=settings.FACTORMIX_NEWTON_MAX,
        help='Newton steps per item and iteration',
    )
    parser.add_argument(
        '--starts',
        type=int,
        default=settings.FACTORMIX_STARTS,
        help='Number of random starts',
    )
    parser.add_argument(
        '--ridge',
        type=float,
        default=settings.FACTORMIX_RIDGE,
        help='Eigenvalue floor of the component covariances',
    )
    add_run_arguments(parser)


def add_run_arguments(parser: CommandParser) -> None:
    """``--seed`` and ``--threads``."""
    parser.add_argument(
        '--seed',
        type=int,
        default=settings.FACTORMIX_SEED,
        help='Root seed of every random draw',
    )
    parser.add_argument(
        '--threads',
        type=int,
        default=settings.FACTORMIX_THREADS,
        help='Worker threads; results do not depend on it',
    )


def add_threshold_argument(parser: CommandParser) -> None:
    """``--residual-threshold``."""
    parser.add_argument(
        '--residual-threshold',
        type=float,
        default=settings.FACTORMIX_RESIDUAL_THRESHOLD,
        help='Largest acceptable bivariate residual',
    )


def fit_config(options: dict[str, Any]) -> FitConfig:
    """Fit configuration from parsed command options."""
    return FitConfig(
        quad_points=options['quad_points'],
        epsilon=options['epsilon'],
        max_iter=options['max_iter'],
        newton_max=options['newton_max'],
        n_starts=options['starts'],
        ridge=options['ridge'],
        seed=options['seed'],
        workers=options['threads'],
    )
