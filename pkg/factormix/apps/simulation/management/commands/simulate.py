"""Management command running a replicated simulation study."""

import argparse
from typing import Any, final, override

from django.core.management.base import CommandParser

from factormix.apps.artifacts.logic.reports import study_report
from factormix.apps.artifacts.management.base import (
    FactorMixCommand,
    add_fit_arguments,
    add_threshold_argument,
    fit_config,
)
from factormix.apps.simulation.logic.design import generate_design
from factormix.apps.simulation.logic.study import run_study


def design_pair(text: str) -> tuple[int, int]:
    """Parse ``"q,k"`` into two positive integers.

    >>> design_pair('1,2')
    (1, 2)
    """
    try:
        q, k = (int(part) for part in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'expected q,k, got {text!r}',
        ) from None
    if q < 1 or k < 1:
        raise argparse.ArgumentTypeError('q and k must be positive')
    return q, k


@final
class Command(FactorMixCommand):
    """Draw replicates from a random true model and refit each."""

    help = 'Run a Monte-Carlo study of selection and recovery'

    @override
    def add_arguments(self, parser: CommandParser) -> None:
        """Add command arguments.

        Args:
            parser: Argument parser.
        """
        parser.add_argument(
            '--design',
            type=design_pair,
            required=True,
            help='True model as q,k',
        )
        parser.add_argument('--n', type=int, default=300, help='Sample size')
        parser.add_argument('--reps', type=int, default=20, help='Replicates')
        parser.add_argument('--items', type=int, default=10, help='Items')
        parser.add_argument('--q-max', type=int, default=None)
        parser.add_argument('--k-max', type=int, default=None)
        add_threshold_argument(parser)
        add_fit_arguments(parser)

    @override
    def run(self, **options: Any) -> None:
        """Generate the design, run it and print the summary.

        Args:
            options: Command options.
        """
        q, k = options['design']
        cfg = fit_config(options)
        design = generate_design(
            q,
            k,
            cfg.seed,
            p=options['items'],
            n=options['n'],
            n_reps=options['reps'],
        )
        summary = run_study(
            design,
            cfg,
            q_max=options['q_max'],
            k_max=options['k_max'],
            threshold=options['residual_threshold'],
            workers=cfg.workers,
        )
        self.emit(study_report(summary), options)
