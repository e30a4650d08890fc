"""Management command to fit one factor mixture model."""

import logging
from pathlib import Path
from typing import Any, final, override

from django.core.management.base import CommandParser

from factormix.apps.artifacts.infrastructure.csv_data import load_csv
from factormix.apps.artifacts.infrastructure.fit_store import write_fit
from factormix.apps.artifacts.logic.assembly import assemble_artifact
from factormix.apps.artifacts.logic.reports import fit_report
from factormix.apps.artifacts.management.base import (
    FactorMixCommand,
    add_fit_arguments,
    add_threshold_argument,
    fit_config,
    now,
)
from factormix.apps.estimation.logic.fitting import fit
from factormix.apps.modeling.models import ModelSpec

logger = logging.getLogger(__name__)


@final
class Command(FactorMixCommand):
    """Fit a model with ``q`` factors and ``k`` components to a CSV file."""

    help = 'Fit a factor mixture model to binary data'

    @override
    def add_arguments(self, parser: CommandParser) -> None:
        """Add command arguments.

        Args:
            parser: Argument parser.
        """
        parser.add_argument('data', type=Path, help='CSV file of 0/1 items')
        parser.add_argument('--q', type=int, required=True, help='Factors')
        parser.add_argument('--k', type=int, required=True, help='Components')
        parser.add_argument(
            '--out',
            type=Path,
            default=None,
            help='Write the fit artifact to this file',
        )
        parser.add_argument(
            '--record-time',
            action='store_true',
            help='Store start and end times in the artifact',
        )
        add_threshold_argument(parser)
        add_fit_arguments(parser)

    @override
    def run(self, **options: Any) -> None:
        """Fit, report and optionally store the artifact.

        Args:
            options: Command options.
        """
        started = now() if options['record_time'] else None
        data = load_csv(options['data'])
        spec = ModelSpec(p=data.p, q=options['q'], k=options['k'])
        result = fit(data, spec, fit_config(options))
        artifact = assemble_artifact(
            result,
            data,
            threshold=options['residual_threshold'],
            created_at=started,
            finished_at=now() if options['record_time'] else None,
        )
        self.emit(fit_report(artifact), options)
        if options['out'] is not None:
            write_fit(artifact, options['out'])
            logger.info('Fit artifact written to %s', options['out'])
            self.stdout.write(
                self.style.SUCCESS(f'Artifact written to {options["out"]}'),
            )
