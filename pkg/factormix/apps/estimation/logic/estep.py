"""E-step: component likelihoods, posteriors and conditional moments."""

import numpy as np
from scipy.special import logsumexp

from factormix.apps.estimation.models import EStepResult
from factormix.apps.modeling.logic.densities import pattern_logprob_matrix
from factormix.apps.modeling.models import ModelParams, PatternTable
from factormix.apps.quadrature.logic.gauss_hermite import transform_grid
from factormix.apps.quadrature.models import TensorGrid
from factormix.common.exceptions import (
    InvalidArgumentError,
    NumericalDegeneracyError,
)
from factormix.common.typing import FloatArray


def component_nodes(params: ModelParams, grid: TensorGrid) -> FloatArray:
    """Grid points mapped into every mixture component.

    Returns:
        ``(k, G, q)`` array of latent nodes.

    Raises:
        NumericalDegeneracyError: If a covariance is not positive definite.
    """
    mixture = params.mixture
    return np.stack([
        transform_grid(grid, mean, covariance).points
        for mean, covariance in zip(
            mixture.means, mixture.covariances, strict=True,
        )
    ])


def _log_weights(weights: FloatArray) -> FloatArray:
    with np.errstate(divide='ignore'):
        return np.log(weights)


def _log_joint(
    params: ModelParams,
    patterns: FloatArray,
    grid: TensorGrid,
    nodes: FloatArray,
) -> FloatArray:
    """``(H, k, G)`` log of pattern probability times the node weight."""
    per_component = [
        pattern_logprob_matrix(params.loadings, patterns, points)
        for points in nodes
    ]
    return np.stack(per_component, axis=1) + grid.log_weights()


def _single_pattern(params: ModelParams, y: FloatArray, i: int) -> FloatArray:
    pattern = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if pattern.shape != (params.spec.p,):
        raise InvalidArgumentError(
            f'pattern has length {pattern.shape[0]}, expected {params.spec.p}',
        )
    if not 0 <= i < params.spec.k:
        raise InvalidArgumentError(
            f'component index {i} is outside 0..{params.spec.k - 1}',
        )
    return pattern[np.newaxis]


def component_pattern_likelihood(
    params: ModelParams,
    grid: TensorGrid,
    y: FloatArray,
    i: int,
) -> float:
    """Quadrature approximation of ``f(y | s_i = 1)``.

    Args:
        params: Model parameters.
        grid: Untransformed grid for ``q`` factors.
        y: Binary pattern of length ``p``.
        i: 0-based component index.

    Returns:
        Probability of ``y`` within component ``i``.
    """
    pattern = _single_pattern(params, y, i)
    nodes = component_nodes(params, grid)[i : i + 1]
    log_joint = _log_joint(params, pattern, grid, nodes)
    return float(np.exp(logsumexp(log_joint[0, 0])))


def conditional_latent_moments(
    params: ModelParams,
    grid: TensorGrid,
    y: FloatArray,
    i: int,
) -> tuple[FloatArray, FloatArray]:
    """Posterior mean and second moment of ``z`` given ``y`` and ``s_i = 1``.

    Returns:
        Length-``q`` mean and ``q x q`` second moment.
    """
    pattern = _single_pattern(params, y, i)
    nodes = component_nodes(params, grid)[i]
    log_joint = _log_joint(params, pattern, grid, nodes[np.newaxis])[0, 0]
    posterior = np.exp(log_joint - logsumexp(log_joint))
    mean = posterior @ nodes
    second = np.einsum('g,gr,gs->rs', posterior, nodes, nodes)
    return mean, second


def component_posteriors(
    weights: FloatArray,
    component_lik: FloatArray,
) -> FloatArray:
    """Posterior component probabilities of one pattern.

    >>> component_posteriors(np.array([0.5, 0.5]), np.array([0.2, 0.1]))
    array([0.66666667, 0.33333333])

    Raises:
        NumericalDegeneracyError: If every weighted likelihood is zero.
    """
    likelihood = np.asarray(component_lik, dtype=np.float64)
    if (likelihood < 0).any():
        raise InvalidArgumentError('likelihoods must be non-negative')
    log_terms = _log_weights(np.asarray(weights)) + _log_weights(likelihood)
    with np.errstate(divide='ignore', invalid='ignore'):
        total = logsumexp(log_terms)
    if not np.isfinite(total):
        raise NumericalDegeneracyError('all component likelihoods vanish')
    return np.exp(log_terms - total)


def e_step(
    params: ModelParams,
    data: PatternTable,
    grid: TensorGrid,
) -> EStepResult:
    """Posterior quantities of every distinct pattern in ``data``.

    Args:
        params: Current parameters.
        data: Collapsed response patterns.
        grid: Untransformed grid for ``q`` factors.

    Returns:
        Responsibilities, conditional moments and the log-likelihood.

    Raises:
        InvalidArgumentError: If ``data`` has the wrong number of items.
        NumericalDegeneracyError: On a singular covariance or a pattern
            every component rules out.
    """
    if data.p != params.spec.p:
        raise InvalidArgumentError(
            f'data has {data.p} items, model expects {params.spec.p}',
        )
    nodes = component_nodes(params, grid)
    log_joint = _log_joint(params, data.patterns, grid, nodes)
    log_lik = logsumexp(log_joint, axis=2)
    node_posteriors = np.exp(log_joint - log_lik[:, :, np.newaxis])

    log_weighted = log_lik + _log_weights(params.mixture.weights)
    log_marginal = logsumexp(log_weighted, axis=1)
    if not np.isfinite(log_marginal).all():
        raise NumericalDegeneracyError('a pattern has zero marginal mass')
    return EStepResult(
        responsibilities=np.exp(log_weighted - log_marginal[:, np.newaxis]),
        component_lik=np.exp(log_lik),
        cond_mean=np.einsum('hig,igr->hir', node_posteriors, nodes),
        cond_second=np.einsum(
            'hig,igr,igs->hirs', node_posteriors, nodes, nodes,
        ),
        loglik=float(data.counts @ log_marginal),
        node_posteriors=node_posteriors,
        nodes=nodes,
    )


def loglik(params: ModelParams, data: PatternTable, grid: TensorGrid) -> float:
    """Observed-data log-likelihood of ``params``."""
    return e_step(params, data, grid).loglik


def pattern_probabilities(
    params: ModelParams,
    patterns: FloatArray,
    grid: TensorGrid,
) -> FloatArray:
    """Marginal probability ``f(y_h)`` of every row of ``patterns``."""
    nodes = component_nodes(params, grid)
    log_lik = logsumexp(_log_joint(params, patterns, grid, nodes), axis=2)
    log_weighted = log_lik + _log_weights(params.mixture.weights)
    return np.exp(logsumexp(log_weighted, axis=1))
