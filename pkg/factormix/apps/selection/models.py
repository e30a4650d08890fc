"""Result types of model comparison and goodness-of-fit checks."""

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Final, NamedTuple, final

import numpy as np

from factormix.common.typing import BoolArray, FloatArray, IntArray

if TYPE_CHECKING:
    from factormix.apps.estimation.models import FitResult

#: Label attached to every reported degrees-of-freedom value.
DF_CONVENTION: Final = 'observed patterns - 1 - free parameters'

#: Cells of a 2x2 bivariate margin in report order.
CELLS: Final = ((0, 0), (0, 1), (1, 0), (1, 1))


class InformationCriteria(NamedTuple):
    """Akaike and Bayesian information criteria of one fit."""

    aic: float
    bic: float


class PatternFitTests(NamedTuple):
    """Pearson and likelihood-ratio statistics over response patterns."""

    gf: float
    lr: float
    df: int
    convention: str = DF_CONVENTION


@final
@dataclass(frozen=True, eq=False)
class BivariateResidualReport:
    """Pearson residuals of every 2x2 bivariate margin.

    Rows of every array follow ``pairs``; columns follow :data:`CELLS`.

    Attributes:
        pairs: ``(P, 2)`` 0-based item pairs ``(j, l)`` with ``j < l``.
        observed: Observed cell counts.
        expected: Model-implied cell counts.
        residuals: ``(O - E)^2 / E`` per cell.
        unstable: Cells whose expected count is below ``1e-12``.
        threshold: Residual above which a cell is considered large.
        item_names: Labels of the items.
    """

    pairs: IntArray
    observed: FloatArray
    expected: FloatArray
    residuals: FloatArray
    unstable: BoolArray
    threshold: float = 4.0
    item_names: tuple[str, ...] = field(default=())

    @property
    def max_residual(self) -> float:
        """Largest residual over all pairs and cells, 0 without pairs."""
        if self.residuals.size == 0:
            return 0.0
        return float(self.residuals.max())

    @property
    def acceptable(self) -> bool:
        """Whether no residual exceeds the threshold."""
        return self.max_residual <= self.threshold

    def greatest_by_cell(self) -> list[tuple[tuple[int, int], int, int, float]]:
        """Largest residual of every cell with the item pair it occurs at.

        Returns:
            ``(cell, j, l, residual)`` for each cell of :data:`CELLS`.
        """
        greatest = []
        for column, cell in enumerate(CELLS):
            if self.residuals.shape[0] == 0:
                continue
            row = int(np.argmax(self.residuals[:, column]))
            j, l = (int(index) for index in self.pairs[row])
            greatest.append((cell, j, l, float(self.residuals[row, column])))
        return greatest

    def large(self) -> list[tuple[int, int, tuple[int, int], float]]:
        """Cells with a residual above the threshold, largest first."""
        rows, columns = np.nonzero(self.residuals > self.threshold)
        found = [
            (
                int(self.pairs[row, 0]),
                int(self.pairs[row, 1]),
                CELLS[column],
                float(self.residuals[row, column]),
            )
            for row, column in zip(rows, columns, strict=True)
        ]
        return sorted(found, key=lambda entry: -entry[3])


@final
@dataclass(frozen=True)
class CandidateRecord:
    """Summary of one candidate fit visited by forward selection."""

    q: int
    k: int
    loglik: float
    n_par: int
    aic: float
    bic: float
    max_residual: float
    gf: float = math.nan
    lr: float = math.nan
    df: int = 0
    converged: bool = True
    failure: str | None = None

    @property
    def failed(self) -> bool:
        """Whether the candidate could not be fitted."""
        return self.failure is not None

    def criterion(self, name: str) -> float:
        """Value of the ``aic`` or ``bic`` criterion."""
        return self.aic if name == 'aic' else self.bic


@final
@dataclass(frozen=True)
class SelectionResult:
    """Outcome of forward selection of ``q`` then ``k``."""

    chosen_q: int
    chosen_k: int
    trace: tuple[CandidateRecord, ...]
    criterion: str = 'aic'
    threshold: float = 4.0
    fits: Mapping[tuple[int, int], 'FitResult'] = field(
        default_factory=dict, compare=False, repr=False,
    )

    def candidates_at(self, q: int) -> tuple[CandidateRecord, ...]:
        """Trace records visited at factor count ``q``."""
        return tuple(record for record in self.trace if record.q == q)

    @property
    def chosen(self) -> CandidateRecord:
        """Trace record of the selected model."""
        return next(
            record
            for record in self.trace
            if (record.q, record.k) == (self.chosen_q, self.chosen_k)
        )
