"""Management command for bootstrap standard errors of a stored fit."""

import dataclasses
from pathlib import Path
from typing import Any, final, override

from django.core.management.base import CommandParser

from factormix.apps.artifacts.infrastructure.fit_store import read_fit
from factormix.apps.artifacts.logic.reports import bootstrap_report
from factormix.apps.artifacts.management.base import (
    FactorMixCommand,
    add_run_arguments,
)
from factormix.apps.inference.logic.bootstrap import (
    bootstrap_standard_errors,
)


@final
class Command(FactorMixCommand):
    """Refit resampled data ``B`` times starting from a stored fit."""

    help = 'Bootstrap standard errors of a fitted model'

    @override
    def add_arguments(self, parser: CommandParser) -> None:
        """Add command arguments.

        Args:
            parser: Argument parser.
        """
        parser.add_argument('--fit', type=Path, required=True)
        parser.add_argument(
            '--b', type=int, default=100, help='Bootstrap replicates',
        )
        add_run_arguments(parser)

    @override
    def run(self, **options: Any) -> None:
        """Run the bootstrap and print estimates with standard errors.

        Args:
            options: Command options.
        """
        artifact = read_fit(options['fit'])
        cfg = dataclasses.replace(
            artifact.config, seed=options['seed'], workers=options['threads'],
        )
        report = bootstrap_standard_errors(
            artifact.data,
            artifact.params.spec,
            cfg,
            options['b'],
            artifact.params,
            workers=options['threads'],
        )
        self.emit(
            bootstrap_report(artifact.params, report, artifact.data.item_names),
            options,
        )
