"""M-step: Newton updates of the loadings and moment updates of the mixture.

The loading update works on expected counts at the latent nodes: with
``W`` the node posteriors of the E-step, every node carries the expected
number of observations located there and the expected number of positive
answers to each item. Each item is then a weighted logistic regression on
the nodes.
"""

import logging
from dataclasses import dataclass
from typing import Final, final

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit

from factormix.apps.estimation.exceptions import ComponentCollapseError
from factormix.apps.estimation.models import (
    EStepResult,
    FitConfig,
    FitDiagnostics,
)
from factormix.apps.modeling.logic.densities import log_response_probs
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    PatternTable,
)
from factormix.apps.quadrature.models import TensorGrid
from factormix.common.exceptions import InvalidArgumentError
from factormix.common.typing import BoolArray, FloatArray

#: Components whose count-weighted responsibility falls below this collapse.
COLLAPSE_THRESHOLD: Final = 1e-8

_MAX_HALVINGS: Final = 30
_GRADIENT_TOLERANCE: Final = 1e-10

logger = logging.getLogger(__name__)


@final
@dataclass(frozen=True, eq=False)
class ExpectedCounts:
    """Expected sufficient statistics of the measurement model.

    Attributes:
        points: ``(M, q)`` latent nodes of all components.
        totals: Expected number of observations at every node.
        positives: ``(M, p)`` expected positive answers per node and item.
    """

    points: FloatArray
    totals: FloatArray
    positives: FloatArray

    def design(self) -> FloatArray:
        """``(M, q + 1)`` regressors: a constant column and the nodes."""
        return np.column_stack([np.ones(self.points.shape[0]), self.points])


def expected_counts(data: PatternTable, estep: EStepResult) -> ExpectedCounts:
    """Aggregate node posteriors into per-node expected counts."""
    weights = (
        (data.counts[:, np.newaxis] * estep.responsibilities)[:, :, np.newaxis]
        * estep.node_posteriors
    )
    k, size, q = estep.nodes.shape
    return ExpectedCounts(
        points=estep.nodes.reshape(k * size, q),
        totals=weights.sum(axis=0).reshape(k * size),
        positives=np.einsum(
            'hig,hj->igj', weights, data.patterns.astype(np.float64),
        ).reshape(k * size, data.p),
    )


def _linear(counts: ExpectedCounts, coefficients: FloatArray) -> FloatArray:
    return coefficients[0] + counts.points @ coefficients[1:]


def expected_item_loglik(
    counts: ExpectedCounts,
    item: int,
    coefficients: FloatArray,
) -> float:
    """Expected complete-data log-likelihood of one item.

    Args:
        counts: Expected counts from :func:`expected_counts`.
        item: 0-based item index.
        coefficients: Intercept followed by the ``q`` loadings of the item.

    Returns:
        Quadrature approximation of the item's objective.
    """
    log_pos, log_neg = log_response_probs(_linear(counts, coefficients))
    positives = counts.positives[:, item]
    return float(positives @ log_pos + (counts.totals - positives) @ log_neg)


def expected_item_score(
    counts: ExpectedCounts,
    item: int,
    coefficients: FloatArray,
) -> FloatArray:
    """Gradient of :func:`expected_item_loglik` in all ``q + 1`` entries."""
    probs = expit(_linear(counts, coefficients))
    residual = counts.positives[:, item] - counts.totals * probs
    return counts.design().T @ residual


def expected_item_information(
    counts: ExpectedCounts,
    item: int,
    coefficients: FloatArray,
) -> FloatArray:
    """Negative Hessian of :func:`expected_item_loglik`."""
    del item
    probs = expit(_linear(counts, coefficients))
    design = counts.design()
    weights = counts.totals * probs * (1 - probs)
    return design.T @ (design * weights[:, np.newaxis])


def _ascent_direction(
    information: FloatArray,
    gradient: FloatArray,
) -> FloatArray | None:
    try:
        direction = cho_solve(cho_factor(information), gradient)
    except (LinAlgError, ValueError):
        return None
    if not np.isfinite(direction).all():
        return None
    return direction


def _newton_item(
    counts: ExpectedCounts,
    item: int,
    coefficients: FloatArray,
    free: BoolArray,
    newton_max: int,
    diagnostics: FitDiagnostics,
) -> FloatArray:
    theta = coefficients.copy()
    current = expected_item_loglik(counts, item, theta)
    for _ in range(newton_max):
        gradient = expected_item_score(counts, item, theta)[free]
        if np.abs(gradient).max() < _GRADIENT_TOLERANCE:
            break
        information = expected_item_information(counts, item, theta)
        direction = _ascent_direction(information[np.ix_(free, free)], gradient)
        if direction is None:
            diagnostics.gradient_fallbacks += 1
            logger.warning(
                'Singular information for item %d, taking a gradient step',
                item + 1,
            )
            direction = gradient / max(1.0, float(np.linalg.norm(gradient)))
        step = 1.0
        for _ in range(_MAX_HALVINGS):
            candidate = theta.copy()
            candidate[free] += step * direction
            value = expected_item_loglik(counts, item, candidate)
            if value >= current:
                theta, current = candidate, value
                break
            step /= 2
        else:
            break
    return theta


def update_loadings(
    params: ModelParams,
    data: PatternTable,
    estep: EStepResult,
    grid: TensorGrid,
    cfg: FitConfig,
    diagnostics: FitDiagnostics | None = None,
) -> Loadings:
    """Improve intercepts and loadings by damped Newton steps.

    Every item gets at most ``cfg.newton_max`` steps. A step is halved
    until the item's expected log-likelihood does not decrease; masked
    loadings stay exactly zero.

    Args:
        params: Parameters the E-step was computed at.
        data: Collapsed response patterns.
        estep: E-step at ``params``.
        grid: Grid the E-step was computed on.
        cfg: Fit configuration.
        diagnostics: Receives the count of gradient fallbacks.

    Returns:
        Updated loadings.
    """
    if estep.nodes.shape[1] != grid.size:
        raise InvalidArgumentError('E-step was computed on another grid')
    diagnostics = diagnostics if diagnostics is not None else FitDiagnostics()
    counts = expected_counts(data, estep)
    loadings = params.loadings
    coefficients = np.column_stack([loadings.intercepts, loadings.matrix])
    for item in range(loadings.p):
        free = np.concatenate([[True], loadings.free_mask()[item]])
        coefficients[item] = _newton_item(
            counts,
            item,
            coefficients[item],
            free,
            cfg.newton_max,
            diagnostics,
        )
    return Loadings.identified(coefficients[:, 0], coefficients[:, 1:])


def floor_eigenvalues(covariances: FloatArray, ridge: float) -> FloatArray:
    """Symmetrize a stack of matrices and floor their eigenvalues."""
    symmetric = (covariances + covariances.transpose(0, 2, 1)) / 2
    values, vectors = np.linalg.eigh(symmetric)
    values = np.maximum(values, ridge)
    rebuilt = np.einsum('irs,is,its->irt', vectors, values, vectors)
    return (rebuilt + rebuilt.transpose(0, 2, 1)) / 2


def update_mixture(
    data: PatternTable,
    estep: EStepResult,
    ridge: float = 1e-6,
) -> MixtureParams:
    """Count-weighted moment updates of the mixture.

    Args:
        data: Collapsed response patterns.
        estep: Current E-step.
        ridge: Floor on covariance eigenvalues.

    Returns:
        Updated weights, means and covariances, not yet standardized.

    Raises:
        ComponentCollapseError: If a component has no responsibility left.
    """
    weights = data.counts[:, np.newaxis] * estep.responsibilities
    totals = weights.sum(axis=0)
    for component, total in enumerate(totals):
        if total < COLLAPSE_THRESHOLD:
            raise ComponentCollapseError(component, float(total))
    means = np.einsum('hi,hir->ir', weights, estep.cond_mean)
    means /= totals[:, np.newaxis]
    second = np.einsum('hi,hirs->irs', weights, estep.cond_second)
    second /= totals[:, np.newaxis, np.newaxis]
    covariances = second - np.einsum('ir,is->irs', means, means)
    return MixtureParams(
        weights=totals / totals.sum(),
        means=means,
        covariances=floor_eigenvalues(covariances, ridge),
    )
