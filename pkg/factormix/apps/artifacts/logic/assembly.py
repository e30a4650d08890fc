"""Building fit artifacts from fit results."""

from factormix.apps.artifacts.models import FitArtifact
from factormix.apps.estimation.models import FitResult
from factormix.apps.inference.logic.scoring import factor_scores
from factormix.apps.modeling.models import PatternTable
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.apps.selection.logic.goodness import (
    bivariate_residuals,
    pattern_fit_tests,
)


def assemble_artifact(
    result: FitResult,
    data: PatternTable,
    *,
    threshold: float = 4.0,
    created_at: str | None = None,
    finished_at: str | None = None,
) -> FitArtifact:
    """Compute the post-fit diagnostics of ``result`` and bundle them.

    Args:
        result: Fit on ``data``.
        data: Collapsed response patterns.
        threshold: Bivariate residual threshold.
        created_at: Start time to record.
        finished_at: End time to record.

    Returns:
        The complete artifact.
    """
    params = result.params
    grid = tensor_grid(params.spec.q, result.config.quad_points)
    return FitArtifact(
        params=params,
        config=result.config,
        data=data,
        loglik_trace=result.loglik_trace,
        converged=result.converged,
        n_iter=result.n_iter,
        criteria=result.criteria,
        tests=pattern_fit_tests(params, data, grid),
        posteriors=result.posteriors,
        factor_scores=factor_scores(params, data, grid),
        residuals=bivariate_residuals(params, data, grid, threshold),
        created_at=created_at,
        finished_at=finished_at,
    )
