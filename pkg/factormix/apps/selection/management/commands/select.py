"""Management command for forward selection of ``q`` and ``k``."""

from pathlib import Path
from typing import Any, final, override

from django.conf import settings
from django.core.management.base import CommandParser

from factormix.apps.artifacts.infrastructure.csv_data import load_csv
from factormix.apps.artifacts.infrastructure.fit_store import write_fit
from factormix.apps.artifacts.logic.assembly import assemble_artifact
from factormix.apps.artifacts.logic.reports import selection_report
from factormix.apps.artifacts.management.base import (
    FactorMixCommand,
    add_fit_arguments,
    add_threshold_argument,
    fit_config,
)
from factormix.apps.selection.logic.forward import CRITERIA, forward_select


@final
class Command(FactorMixCommand):
    """Pick ``q`` by the residual screen, then ``k`` by a criterion."""

    help = 'Select the number of factors and components'

    @override
    def add_arguments(self, parser: CommandParser) -> None:
        """Add command arguments.

        Args:
            parser: Argument parser.
        """
        parser.add_argument('data', type=Path, help='CSV file of 0/1 items')
        parser.add_argument('--q-max', type=int, required=True)
        parser.add_argument('--k-max', type=int, required=True)
        parser.add_argument(
            '--criterion',
            choices=CRITERIA,
            default=settings.FACTORMIX_CRITERION,
            help='Criterion choosing k',
        )
        parser.add_argument(
            '--out',
            type=Path,
            default=None,
            help='Write the artifact of the selected fit to this file',
        )
        add_threshold_argument(parser)
        add_fit_arguments(parser)

    @override
    def run(self, **options: Any) -> None:
        """Run the selection and print its trace.

        Args:
            options: Command options.
        """
        data = load_csv(options['data'])
        threshold = options['residual_threshold']
        cfg = fit_config(options)
        result = forward_select(
            data,
            options['q_max'],
            options['k_max'],
            cfg,
            criterion=options['criterion'],
            threshold=threshold,
            workers=cfg.workers,
        )
        self.emit(selection_report(result), options)
        if options['out'] is not None:
            chosen = result.fits[result.chosen_q, result.chosen_k]
            write_fit(
                assemble_artifact(chosen, data, threshold=threshold),
                options['out'],
            )
