"""Closed-form densities of the measurement model and the latent mixture."""

from typing import TYPE_CHECKING, Final

import numpy as np
from numpy.linalg import LinAlgError
from scipy.special import expit, log_expit
from scipy.stats import multivariate_normal

from factormix.common.exceptions import (
    InvalidArgumentError,
    NumericalDegeneracyError,
)

if TYPE_CHECKING:
    from factormix.apps.modeling.models import Loadings, MixtureParams
    from factormix.common.typing import FloatArray

#: Probabilities are kept inside ``[PROBABILITY_FLOOR, 1 - PROBABILITY_FLOOR]``
#: before taking logarithms.
PROBABILITY_FLOOR: Final = 1e-12


def _as_finite(values: object, name: str) -> 'FloatArray':
    array = np.asarray(values, dtype=np.float64)
    if not np.isfinite(array).all():
        raise InvalidArgumentError(f'{name} must be finite')
    return array


def item_response_prob(
    intercept: float,
    loading_row: 'FloatArray',
    z: 'FloatArray',
) -> float:
    """Probability of a positive answer to one item at latent point ``z``.

    Args:
        intercept: Item intercept on the logit scale.
        loading_row: Length-``q`` loadings of the item.
        z: Length-``q`` latent point.

    Returns:
        ``logistic(intercept + loading_row @ z)``.

    Raises:
        InvalidArgumentError: On non-finite input or mismatched lengths.
    """
    row = np.atleast_1d(_as_finite(loading_row, 'loading_row'))
    point = np.atleast_1d(_as_finite(z, 'z'))
    if row.shape != point.shape:
        raise InvalidArgumentError('loading_row and z must have equal length')
    linear = float(_as_finite(intercept, 'intercept')) + float(row @ point)
    return float(expit(linear))


def _linear_predictor(
    loadings: 'Loadings',
    points: 'FloatArray',
) -> 'FloatArray':
    return loadings.intercepts + points @ loadings.matrix.T


def log_response_probs(
    linear: 'FloatArray',
) -> tuple['FloatArray', 'FloatArray']:
    """Clamped ``log(pi)`` and ``log(1 - pi)`` for linear predictors."""
    probs = np.clip(expit(linear), PROBABILITY_FLOOR, 1 - PROBABILITY_FLOOR)
    return np.log(probs), np.log1p(-probs)


def pattern_logprob_matrix(
    loadings: 'Loadings',
    patterns: 'FloatArray',
    points: 'FloatArray',
) -> 'FloatArray':
    """``log f(y_h | z_g)`` for every pattern and latent point.

    Args:
        loadings: Measurement model parameters.
        patterns: ``(H, p)`` binary patterns.
        points: ``(G, q)`` latent points.

    Returns:
        ``(H, G)`` matrix of conditional log-probabilities.
    """
    log_pos, log_neg = log_response_probs(_linear_predictor(loadings, points))
    ones = np.asarray(patterns, dtype=np.float64)
    return ones @ log_pos.T + (1 - ones) @ log_neg.T


def _checked_pattern(
    loadings: 'Loadings',
    y: 'FloatArray',
    z: 'FloatArray',
) -> tuple['FloatArray', 'FloatArray']:
    pattern = np.atleast_1d(np.asarray(y, dtype=np.float64))
    point = np.atleast_1d(_as_finite(z, 'z'))
    if pattern.shape != (loadings.p,):
        raise InvalidArgumentError(
            f'pattern has length {pattern.shape[0]}, expected {loadings.p}',
        )
    if point.shape != (loadings.q,):
        raise InvalidArgumentError(
            f'latent point has length {point.shape[0]}, '
            f'expected {loadings.q}',
        )
    return pattern, point


def pattern_conditional_logprob(
    loadings: 'Loadings',
    y: 'FloatArray',
    z: 'FloatArray',
) -> float:
    """Log-probability of pattern ``y`` given latent point ``z``.

    Item probabilities are clamped away from 0 and 1, so the result is
    always finite.

    Raises:
        InvalidArgumentError: On dimension mismatch.
    """
    pattern, point = _checked_pattern(loadings, y, z)
    matrix = pattern_logprob_matrix(
        loadings, pattern[np.newaxis], point[np.newaxis],
    )
    return float(matrix[0, 0])


def pattern_conditional_prob(
    loadings: 'Loadings',
    y: 'FloatArray',
    z: 'FloatArray',
) -> float:
    """Probability of pattern ``y`` given latent point ``z``.

    Evaluated as the exponential of an unclamped log-scale sum.

    Raises:
        InvalidArgumentError: On dimension mismatch.
    """
    pattern, point = _checked_pattern(loadings, y, z)
    linear = _linear_predictor(loadings, point)
    log_prob = pattern @ log_expit(linear) + (1 - pattern) @ log_expit(-linear)
    return float(np.exp(log_prob))


def latent_density(mixture: 'MixtureParams', z: 'FloatArray') -> float:
    """Density of the Gaussian mixture of the factors at ``z``.

    Raises:
        InvalidArgumentError: When ``z`` has the wrong length.
        NumericalDegeneracyError: When a component covariance is singular.
    """
    point = np.atleast_1d(_as_finite(z, 'z'))
    if point.shape != (mixture.q,):
        raise InvalidArgumentError(
            f'latent point has length {point.shape[0]}, '
            f'expected {mixture.q}',
        )
    density = 0.0
    for weight, mean, covariance in zip(
        mixture.weights, mixture.means, mixture.covariances, strict=True,
    ):
        try:
            component = multivariate_normal(mean=mean, cov=covariance)
        except (LinAlgError, ValueError) as error:
            raise NumericalDegeneracyError(
                'component covariance is singular',
            ) from error
        density += weight * float(component.pdf(point))
    return density
