"""Fit artifacts: everything a fit run produces, in one value."""

from dataclasses import dataclass
from typing import Final, final

from factormix.apps.estimation.models import FitConfig
from factormix.apps.inference.logic.scoring import classify_map
from factormix.apps.modeling.models import ModelParams, PatternTable
from factormix.apps.selection.models import (
    BivariateResidualReport,
    InformationCriteria,
    PatternFitTests,
)
from factormix.common.typing import FloatArray, IntArray

#: Version written into, and required from, every artifact file.
FORMAT_VERSION: Final = 1


@final
@dataclass(frozen=True, eq=False)
class FitArtifact:
    """Result of a fit with its diagnostics and the data it was fitted on.

    Attributes:
        params: Estimated parameters, which also carry the model spec.
        config: Configuration the fit ran with.
        data: Collapsed data of the fit.
        loglik_trace: Log-likelihood per iteration.
        converged: Whether the tolerance was reached.
        n_iter: Iterations performed.
        criteria: AIC and BIC.
        tests: GF and LR statistics with degrees of freedom.
        posteriors: ``(H, k)`` component posteriors per pattern.
        factor_scores: ``(H, q)`` posterior factor means per pattern.
        residuals: Bivariate residual report.
        created_at: ISO start time, when recorded.
        finished_at: ISO end time, when recorded.
        format_version: Artifact format version.
    """

    params: ModelParams
    config: FitConfig
    data: PatternTable
    loglik_trace: FloatArray
    converged: bool
    n_iter: int
    criteria: InformationCriteria
    tests: PatternFitTests
    posteriors: FloatArray
    factor_scores: FloatArray
    residuals: BivariateResidualReport
    created_at: str | None = None
    finished_at: str | None = None
    format_version: int = FORMAT_VERSION

    @property
    def seed(self) -> int:
        """Root seed of the fit."""
        return self.config.seed

    @property
    def loglik(self) -> float:
        """Final log-likelihood."""
        return float(self.loglik_trace[-1])

    @property
    def map_labels(self) -> IntArray:
        """0-based MAP component per pattern."""
        return classify_map(self.posteriors)
