"""Management command printing bivariate residuals of a stored fit."""

from pathlib import Path
from typing import Any, final, override

from django.core.management.base import CommandParser

from factormix.apps.artifacts.infrastructure.csv_data import load_csv
from factormix.apps.artifacts.infrastructure.fit_store import read_fit
from factormix.apps.artifacts.logic.reports import residual_report
from factormix.apps.artifacts.management.base import (
    FactorMixCommand,
    add_threshold_argument,
)
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.apps.selection.logic.goodness import bivariate_residuals
from factormix.common.exceptions import InvalidArgumentError


@final
class Command(FactorMixCommand):
    """Bivariate residuals of a fit, on its own or on new data."""

    help = 'Print the bivariate residuals of a fitted model'

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
            help='CSV file to test against, defaults to the fitted data',
        )
        add_threshold_argument(parser)

    @override
    def run(self, **options: Any) -> None:
        """Compute and print the residual tables.

        Args:
            options: Command options.
        """
        artifact = read_fit(options['fit'])
        params = artifact.params
        if options['data'] is None:
            data = artifact.data
        else:
            data = load_csv(options['data'])
        if data.p != params.spec.p:
            raise InvalidArgumentError(
                f'data has {data.p} items, the fit has {params.spec.p}',
            )
        grid = tensor_grid(params.spec.q, artifact.config.quad_points)
        report = bivariate_residuals(
            params, data, grid, options['residual_threshold'],
        )
        self.emit(residual_report(report), options)
