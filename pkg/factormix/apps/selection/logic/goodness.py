"""Bivariate residuals and pattern-level goodness-of-fit statistics."""

import itertools
from typing import Final

import numpy as np
from scipy.special import expit, xlogy

from factormix.apps.estimation.logic.estep import (
    component_nodes,
    pattern_probabilities,
)
from factormix.apps.modeling.models import ModelParams, PatternTable
from factormix.apps.quadrature.models import TensorGrid
from factormix.apps.selection.models import (
    BivariateResidualReport,
    PatternFitTests,
)
from factormix.common.exceptions import (
    InvalidArgumentError,
    NumericalDegeneracyError,
)
from factormix.common.typing import BoolArray, FloatArray, IntArray

#: Expected counts below this are not divided by.
UNSTABLE_EXPECTED: Final = 1e-12


def pearson_cell_residuals(
    observed: FloatArray,
    expected: FloatArray,
) -> tuple[FloatArray, BoolArray]:
    """Per-cell ``(O - E)^2 / E`` with tiny expected counts flagged.

    An unstable cell gets an infinite residual if anything was observed
    there and zero otherwise.

    >>> pearson_cell_residuals(
    ...     np.array([30.0, 20.0, 20.0, 30.0]), np.full(4, 25.0),
    ... )[0]
    array([1., 1., 1., 1.])

    Returns:
        Residuals and the mask of unstable cells.
    """
    observed = np.asarray(observed, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    if observed.shape != expected.shape:
        raise InvalidArgumentError('observed and expected differ in shape')
    unstable = expected < UNSTABLE_EXPECTED
    safe = np.where(unstable, 1.0, expected)
    residuals = np.where(
        unstable,
        np.where(observed > 0, np.inf, 0.0),
        (observed - expected) ** 2 / safe,
    )
    return residuals, unstable


def bivariate_margins(params: ModelParams, grid: TensorGrid) -> FloatArray:
    """Model-implied ``P(y_j = 1, y_l = 1)`` and ``P(y_j = 1)``.

    Returns:
        ``(p, p)`` matrix of joint positive probabilities whose diagonal
        holds the marginal positive probabilities.
    """
    loadings = params.loadings
    weights = grid.weights * grid.normalizer
    joint = np.zeros((loadings.p, loadings.p))
    for tau, nodes in zip(
        params.mixture.weights,
        component_nodes(params, grid),
        strict=True,
    ):
        probs = expit(loadings.intercepts + nodes @ loadings.matrix.T)
        joint += tau * (probs.T * weights) @ probs
        np.fill_diagonal(
            joint, joint.diagonal() + tau * (weights @ (probs - probs**2)),
        )
    return joint


def bivariate_residuals(
    params: ModelParams,
    data: PatternTable,
    grid: TensorGrid,
    threshold: float = 4.0,
) -> BivariateResidualReport:
    """Pearson residuals on every 2x2 margin of pairs of items.

    Args:
        params: Fitted parameters.
        data: Collapsed response patterns.
        grid: Untransformed grid for ``q`` factors.
        threshold: Residual regarded as large.

    Returns:
        The residual report over all pairs ``j < l``.
    """
    if data.p != params.spec.p:
        raise InvalidArgumentError(
            f'data has {data.p} items, model expects {params.spec.p}',
        )
    patterns = data.patterns.astype(np.float64)
    observed_joint = (patterns.T * data.counts) @ patterns
    expected_joint = data.n * bivariate_margins(params, grid)
    pairs = np.array(
        list(itertools.combinations(range(data.p), 2)), dtype=np.int64,
    ).reshape(-1, 2)
    observed = _cells(observed_joint, pairs, data.n)
    expected = _cells(expected_joint, pairs, data.n)
    residuals, unstable = pearson_cell_residuals(observed, expected)
    return BivariateResidualReport(
        pairs=pairs,
        observed=observed,
        expected=expected,
        residuals=residuals,
        unstable=unstable,
        threshold=threshold,
        item_names=data.item_names,
    )


def _cells(joint: FloatArray, pairs: IntArray, total: float) -> FloatArray:
    first, second = pairs[:, 0], pairs[:, 1]
    both = joint[first, second]
    only_first = joint[first, first] - both
    only_second = joint[second, second] - both
    neither = total - joint[first, first] - joint[second, second] + both
    return np.column_stack([neither, only_second, only_first, both])


def pattern_statistics(
    observed: FloatArray,
    probabilities: FloatArray,
    n: int,
) -> tuple[float, float]:
    """Pearson ``GF`` and likelihood-ratio ``LR`` over observed patterns.

    The probability mass of unobserved patterns forms one extra cell of
    the Pearson statistic.

    >>> pattern_statistics(np.array([60, 40]), np.array([0.5, 0.5]), 100)
    (4.0, 4.027...)

    Raises:
        NumericalDegeneracyError: If an observed pattern has no mass.
    """
    observed = np.asarray(observed, dtype=np.float64)
    expected = n * np.asarray(probabilities, dtype=np.float64)
    if (expected <= 0).any():
        raise NumericalDegeneracyError(
            'an observed pattern has zero expected count',
        )
    remainder = max(0.0, n - float(expected.sum()))
    gf = float(((observed - expected) ** 2 / expected).sum()) + remainder
    lr = 2 * float(xlogy(observed, observed / expected).sum())
    return gf, lr


def pattern_fit_tests(
    params: ModelParams,
    data: PatternTable,
    grid: TensorGrid,
) -> PatternFitTests:
    """``GF`` and ``LR`` statistics with their degrees of freedom.

    Returns:
        The statistics and ``df`` under the declared convention.
    """
    probabilities = pattern_probabilities(params, data.patterns, grid)
    gf, lr = pattern_statistics(data.counts, probabilities, data.n)
    return PatternFitTests(
        gf=gf,
        lr=lr,
        df=data.n_patterns - 1 - params.spec.n_free_parameters,
    )
