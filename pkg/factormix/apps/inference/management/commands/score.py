"""Management command printing MAP clusters and factor scores."""

import dataclasses
from pathlib import Path
from typing import Any, final, override

from django.core.management.base import CommandParser

from factormix.apps.artifacts.infrastructure.csv_data import load_csv
from factormix.apps.artifacts.infrastructure.fit_store import read_fit
from factormix.apps.artifacts.logic.reports import score_report
from factormix.apps.artifacts.management.base import FactorMixCommand
from factormix.apps.estimation.logic.estep import e_step
from factormix.apps.inference.logic.scoring import factor_scores
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.common.exceptions import InvalidArgumentError


@final
class Command(FactorMixCommand):
    """Allocate every response pattern and score its factors."""

    help = 'Print MAP clusters, posteriors and factor scores per pattern'

    @override
    def add_arguments(self, parser: CommandParser) -> None:
        """Add command arguments.

        Args:
            parser: Argument parser.
        """
        parser.add_argument('--fit', type=Path, required=True)
        parser.add_argument(
            '--data',
            type=Path,
            default=None,
            help='CSV file to score, defaults to the fitted data',
        )

    @override
    def run(self, **options: Any) -> None:
        """Score the patterns and print the table.

        Args:
            options: Command options.
        """
        artifact = read_fit(options['fit'])
        if options['data'] is not None:
            data = load_csv(options['data'])
            params = artifact.params
            if data.p != params.spec.p:
                raise InvalidArgumentError(
                    f'data has {data.p} items, the fit has {params.spec.p}',
                )
            grid = tensor_grid(params.spec.q, artifact.config.quad_points)
            artifact = dataclasses.replace(
                artifact,
                data=data,
                posteriors=e_step(params, data, grid).responsibilities,
                factor_scores=factor_scores(params, data, grid),
            )
        self.emit(score_report(artifact, artifact.factor_scores), options)
