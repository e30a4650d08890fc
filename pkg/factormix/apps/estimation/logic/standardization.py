"""Centering and scaling of the latent factors.

A mixture is standardized by ``z -> A^-1 (z - m)`` where ``m`` and
``A A^T`` are its overall mean and covariance and ``A`` is lower
triangular. Compensating the measurement model keeps the distribution
of the responses unchanged.
"""

import numpy as np
from scipy.linalg import solve_triangular

from factormix.apps.modeling.models import Loadings, MixtureParams, ModelParams
from factormix.apps.quadrature.logic.gauss_hermite import lower_cholesky
from factormix.common.typing import FloatArray


def standardize_mixture(
    mixture: MixtureParams,
) -> tuple[MixtureParams, FloatArray, FloatArray]:
    """Rescale a mixture to zero overall mean and identity covariance.

    A single component maps to exactly ``N(0, I)``.

    Args:
        mixture: Mixture with positive definite covariances.

    Returns:
        The standardized mixture, the removed mean ``m`` and the lower
        Cholesky factor ``A`` of the removed covariance.

    Raises:
        NumericalDegeneracyError: If the overall covariance is singular.
    """
    if mixture.k == 1:
        return (
            MixtureParams.standard_normal(mixture.q),
            mixture.means[0].copy(),
            lower_cholesky(mixture.covariances[0]),
        )
    mean, covariance = mixture.overall_moments()
    factor = lower_cholesky((covariance + covariance.T) / 2)
    means = solve_triangular(factor, (mixture.means - mean).T, lower=True).T
    covariances = np.stack([
        solve_triangular(
            factor,
            solve_triangular(factor, component, lower=True).T,
            lower=True,
        )
        for component in mixture.covariances
    ])
    covariances = (covariances + covariances.transpose(0, 2, 1)) / 2
    standardized = MixtureParams(
        weights=mixture.weights,
        means=means,
        covariances=covariances,
    )
    return standardized, mean, factor


def standardize(params: ModelParams) -> ModelParams:
    """Standardize the factors without changing the response distribution.

    Intercepts become ``lambda_0 + Lambda m`` and loadings ``Lambda A``;
    ``A`` is lower triangular, so the structural zeros survive.

    Args:
        params: Parameters with a positive definite mixture.

    Returns:
        Equivalent parameters whose mixture is standardized.

    Raises:
        NumericalDegeneracyError: If the overall covariance is singular.
    """
    mixture, mean, factor = standardize_mixture(params.mixture)
    loadings = params.loadings
    return ModelParams(
        loadings=Loadings.identified(
            loadings.intercepts + loadings.matrix @ mean,
            loadings.matrix @ factor,
        ),
        mixture=mixture,
        spec=params.spec,
    )
