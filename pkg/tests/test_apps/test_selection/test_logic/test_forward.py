"""Tests for forward selection of factors and components."""

import math

import pytest

from factormix.apps.estimation.exceptions import FitError
from factormix.apps.estimation.models import FitConfig
from factormix.apps.modeling.models import ModelSpec, PatternTable
from factormix.apps.selection.exceptions import SelectionFailedError
from factormix.apps.selection.logic import forward
from factormix.apps.selection.logic.forward import (
    evaluate_candidate,
    forward_select,
)
from factormix.common.exceptions import InvalidArgumentError


def test_single_candidate(
    small_data: PatternTable,
    quick_config: FitConfig,
) -> None:
    """With one candidate it is chosen when it passes the screen."""
    result = forward_select(
        small_data, 1, 1, quick_config, threshold=1e6,
    )

    assert (result.chosen_q, result.chosen_k) == (1, 1)
    assert len(result.trace) == 1
    assert result.chosen.max_residual <= 1e6
    assert result.fits[1, 1].params.spec == ModelSpec(p=4, q=1, k=1)


@pytest.mark.parametrize('criterion', ['aic', 'bic'])
def test_components_chosen_by_criterion(
    small_data: PatternTable,
    quick_config: FitConfig,
    criterion: str,
) -> None:
    """The smallest criterion among passing candidates wins."""
    result = forward_select(
        small_data, 1, 2, quick_config, criterion=criterion, threshold=1e6,
    )

    best = min(result.trace, key=lambda record: record.criterion(criterion))
    assert result.chosen is best
    assert result.criterion == criterion
    assert [record.k for record in result.candidates_at(1)] == [1, 2]


def test_nothing_passes_the_screen(
    small_data: PatternTable,
    quick_config: FitConfig,
) -> None:
    """A tiny threshold rejects every candidate."""
    with pytest.raises(SelectionFailedError) as error:
        forward_select(small_data, 1, 1, quick_config, threshold=1e-9)

    assert error.value.exit_code == 4
    assert len(error.value.trace) == 1
    assert 'q <= 1' in str(error.value)


def test_failed_candidate_is_recorded(
    small_data: PatternTable,
    quick_config: FitConfig,
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    """A failing fit becomes a trace record, not an exception."""

    def failing(*args: object) -> None:
        raise FitError([(0, 'collapsed')])

    monkeypatch.setattr(forward, 'fit', failing)

    record, result = evaluate_candidate(
        small_data, ModelSpec(p=4, q=1, k=2), quick_config,
    )

    assert result is None
    assert record.failed
    assert record.aic == math.inf
    assert 'collapsed' in (record.failure or '')
    with pytest.raises(SelectionFailedError):
        forward_select(small_data, 1, 2, quick_config, threshold=1e6)


@pytest.mark.parametrize(
    ('q_max', 'k_max', 'criterion'),
    [(1, 1, 'hqic'), (0, 1, 'aic'), (1, 0, 'aic'), (2, 1, 'aic')],
)
def test_invalid_arguments(
    small_data: PatternTable,
    q_max: int,
    k_max: int,
    criterion: str,
) -> None:
    """Unknown criteria and impossible bounds are rejected early."""
    with pytest.raises(InvalidArgumentError):
        forward_select(small_data, q_max, k_max, criterion=criterion)
