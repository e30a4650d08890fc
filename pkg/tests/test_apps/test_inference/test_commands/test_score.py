"""Tests for the ``score`` management command."""

from io import StringIO
from pathlib import Path

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from factormix.apps.artifacts.models import FitArtifact


def test_scores_of_fitted_data(
    stored_fit: Path,
    artifact: FitArtifact,
) -> None:
    """One line per observed pattern."""
    stdout = StringIO()

    call_command('score', '--fit', str(stored_fit), stdout=stdout)

    lines = stdout.getvalue().splitlines()
    assert lines[0].split()[-1] == 'score1'
    assert len(lines) == artifact.data.n_patterns + 1


def test_scores_of_new_data(stored_fit: Path, write_text) -> None:
    """New patterns are scored with the stored parameters."""
    data = write_text('new.csv', 'a,b,c,d\n1,1,1,1\n0,0,0,0\n0,0,0,0\n')
    stdout = StringIO()

    call_command(
        'score', '--fit', str(stored_fit), '--data', str(data), stdout=stdout,
    )

    rows = stdout.getvalue().splitlines()[1:]
    assert [row.split()[:2] for row in rows] == [['0000', '2'], ['1111', '1']]


def test_data_with_other_items(stored_fit: Path, write_text) -> None:
    """Item counts must agree."""
    data = write_text('new.csv', 'a\n1\n')

    with pytest.raises(CommandError, match='1 items'):
        call_command(
            'score', '--fit', str(stored_fit), '--data', str(data),
            stdout=StringIO(),
        )
