import math

import numpy as np
import pytest

from factormix.apps.selection.models import (
    BivariateResidualReport,
    CandidateRecord,
    SelectionResult,
)


@pytest.fixture
def report() -> BivariateResidualReport:
    """Three pairs of items with hand-made residuals."""
    residuals = np.array([
        [0.5, 6.0, 0.1, 1.0],
        [5.0, 0.2, 0.3, 9.0],
        [0.1, 0.4, 2.0, 0.0],
    ])
    return BivariateResidualReport(
        pairs=np.array([[0, 1], [0, 2], [1, 2]]),
        observed=np.ones((3, 4)),
        expected=np.ones((3, 4)),
        residuals=residuals,
        unstable=np.zeros((3, 4), dtype=bool),
        threshold=4.0,
    )


def test_max_residual(report: BivariateResidualReport) -> None:
    """The largest cell decides."""
    assert report.max_residual == 9.0
    assert not report.acceptable


def test_greatest_by_cell(report: BivariateResidualReport) -> None:
    """One entry per cell with its pair."""
    assert report.greatest_by_cell() == [
        ((0, 0), 0, 2, 5.0),
        ((0, 1), 0, 1, 6.0),
        ((1, 0), 1, 2, 2.0),
        ((1, 1), 0, 2, 9.0),
    ]


def test_large_residuals_sorted(report: BivariateResidualReport) -> None:
    """Cells above the threshold, largest first."""
    assert report.large() == [
        (0, 2, (1, 1), 9.0),
        (0, 1, (0, 1), 6.0),
        (0, 2, (0, 0), 5.0),
    ]


def test_report_without_pairs() -> None:
    """A single item has no bivariate margins."""
    empty = BivariateResidualReport(
        pairs=np.zeros((0, 2), dtype=np.int64),
        observed=np.zeros((0, 4)),
        expected=np.zeros((0, 4)),
        residuals=np.zeros((0, 4)),
        unstable=np.zeros((0, 4), dtype=bool),
    )

    assert empty.max_residual == 0.0
    assert empty.acceptable
    assert empty.greatest_by_cell() == []


def test_selection_result_lookup() -> None:
    """Records are found by their model dimensions."""
    records = tuple(
        CandidateRecord(
            q=q, k=k, loglik=-10.0, n_par=3, aic=26.0 - k, bic=30.0,
            max_residual=1.0,
        )
        for q in (1, 2)
        for k in (1, 2)
    )
    failed = CandidateRecord(
        q=2, k=3, loglik=math.nan, n_par=9, aic=math.inf, bic=math.inf,
        max_residual=math.inf, failure='collapsed',
    )
    result = SelectionResult(chosen_q=2, chosen_k=2, trace=(*records, failed))

    assert result.chosen is records[3]
    assert len(result.candidates_at(2)) == 3
    assert failed.failed
    assert not records[0].failed
    assert records[1].criterion('aic') == 24.0
    assert records[1].criterion('bic') == 30.0
