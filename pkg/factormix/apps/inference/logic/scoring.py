"""Classification, factor scores and cluster profiles of a fitted model."""

import numpy as np
import pandas as pd

from factormix.apps.estimation.logic.estep import e_step
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    PatternTable,
)
from factormix.apps.quadrature.models import TensorGrid
from factormix.common.exceptions import InvalidArgumentError
from factormix.common.typing import FloatArray, IntArray


def classify_map(posteriors: FloatArray) -> IntArray:
    """0-based component of maximal posterior for every row.

    Ties go to the lowest index.

    >>> classify_map(np.array([[0.7, 0.3], [0.5, 0.5], [0.1, 0.9]]))
    array([0, 0, 1])
    """
    matrix = np.asarray(posteriors, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] == 0:
        raise InvalidArgumentError('posteriors must be a non-empty matrix')
    return np.argmax(matrix, axis=1)


def factor_scores(
    params: ModelParams,
    data: PatternTable,
    grid: TensorGrid,
) -> FloatArray:
    """Posterior mean of the factors for every distinct pattern.

    Returns:
        ``(H, q)`` matrix ``E[z | y_h]``.
    """
    estep = e_step(params, data, grid)
    return np.einsum('hi,hir->hr', estep.responsibilities, estep.cond_mean)


def weighted_loadings(loadings: Loadings, mixture: MixtureParams) -> FloatArray:
    """Cluster profiles ``Lambda mu_i``.

    Returns:
        ``(k, p)`` matrix, one row per component.
    """
    if loadings.q != mixture.q:
        raise InvalidArgumentError('loadings and mixture disagree on q')
    return mixture.means @ loadings.matrix.T


def allocation_table(
    data: PatternTable,
    posteriors: FloatArray,
) -> pd.DataFrame:
    """Pattern by pattern MAP allocation with the posterior probabilities.

    Clusters are numbered from 1.
    """
    matrix = np.asarray(posteriors, dtype=np.float64)
    if matrix.shape[0] != data.n_patterns:
        raise InvalidArgumentError(
            'posteriors must have one row per pattern',
        )
    table = pd.DataFrame({
        'pattern': [''.join(map(str, row)) for row in data.patterns],
        'count': data.counts,
        'cluster': classify_map(matrix) + 1,
    })
    for component in range(matrix.shape[1]):
        table[f'posterior_{component + 1}'] = matrix[:, component]
    return table
