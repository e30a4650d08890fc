"""Simulation designs: true parameters and data generation."""

import math
from typing import Final

import numpy as np
from scipy.special import expit

from factormix.apps.estimation.logic.standardization import (
    standardize_mixture,
)
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    ModelSpec,
    PatternTable,
)
from factormix.apps.quadrature.logic.gauss_hermite import lower_cholesky
from factormix.apps.simulation.models import SampledData, SimDesign
from factormix.common.exceptions import InvalidArgumentError

_INTERCEPT_RANGE: Final = (-3.0, 3.0)
_ON_BLOCK_RANGE: Final = (2.0, 4.0)
_OFF_BLOCK_RANGE: Final = (0.0, 0.5)
_DESIGN_WEIGHTS: Final = (0.3, 0.3, 0.4)
_COMPONENT_VARIANCE: Final = 0.35
_MEAN_JITTER: Final = 0.1

#: Distance of the component means from the origin before standardizing.
DEFAULT_SEPARATION: Final = 2.0


def design_weights(k: int) -> np.ndarray:
    """Mixing weights of a design with ``k`` components.

    >>> design_weights(2), design_weights(3)
    (array([0.5, 0.5]), array([0.3, 0.3, 0.4]))
    """
    if k <= len(_DESIGN_WEIGHTS):
        weights = np.array(_DESIGN_WEIGHTS[:k])
        return weights / weights.sum()
    return np.full(k, 1 / k)


def design_mixture(
    q: int,
    k: int,
    rng: np.random.Generator,
    separation: float = DEFAULT_SEPARATION,
) -> MixtureParams:
    """Well separated standardized mixture.

    Means sit on a line for one factor and on a regular polygon in the
    first two factors otherwise, with a small random jitter; every
    component has covariance ``0.35 I`` before standardization.
    """
    if k == 1:
        return MixtureParams.standard_normal(q)
    means = np.zeros((k, q))
    if q == 1:
        means[:, 0] = np.linspace(-1, 1, k) * separation
    else:
        angles = 2 * math.pi * np.arange(k) / k
        means[:, 0] = separation * np.cos(angles)
        means[:, 1] = separation * np.sin(angles)
    means += _MEAN_JITTER * rng.standard_normal((k, q))
    mixture, _, _ = standardize_mixture(
        MixtureParams(
            weights=design_weights(k),
            means=means,
            covariances=np.tile(_COMPONENT_VARIANCE * np.eye(q), (k, 1, 1)),
        ),
    )
    return mixture


def design_loadings(p: int, q: int, rng: np.random.Generator) -> Loadings:
    """Random intercepts with a quasi simple loading structure.

    Items are split into ``q`` contiguous blocks, the last one taking the
    remainder; an item loads strongly on its own block's factor only.
    """
    intercepts = rng.uniform(*_INTERCEPT_RANGE, size=p)
    strong = rng.uniform(*_ON_BLOCK_RANGE, size=(p, q))
    weak = rng.uniform(*_OFF_BLOCK_RANGE, size=(p, q))
    block = np.minimum(np.arange(p) // max(p // q, 1), q - 1)
    on_block = block[:, np.newaxis] == np.arange(q)[np.newaxis, :]
    return Loadings.identified(intercepts, np.where(on_block, strong, weak))


def generate_design(
    q: int,
    k: int,
    seed: int,
    *,
    p: int = 10,
    n: int = 300,
    n_reps: int = 20,
    separation: float = DEFAULT_SEPARATION,
) -> SimDesign:
    """Random true model for a simulation study.

    Args:
        q: Number of factors.
        k: Number of components.
        seed: Seed of the parameter draws and of the study.
        p: Number of items.
        n: Observations per replicate.
        n_reps: Number of replicates.
        separation: Distance of the component means from the origin.

    Returns:
        The design.
    """
    spec = ModelSpec(p=p, q=q, k=k)
    if p < q:
        raise InvalidArgumentError('a design needs an item per factor')
    if n < 1 or n_reps < 0:
        raise InvalidArgumentError('n must be positive, n_reps non-negative')
    rng = np.random.default_rng(seed)
    params = ModelParams(
        loadings=design_loadings(p, q, rng),
        mixture=design_mixture(q, k, rng, separation),
        spec=spec,
    )
    return SimDesign(
        spec=spec, true_params=params, n=n, n_reps=n_reps, seed=seed,
    )


def sample_responses(params: ModelParams, n: int, seed: int) -> SampledData:
    """Draw ``n`` observations from the hierarchical model.

    Components are drawn from the weights, factors from the component's
    Gaussian and each item independently given the factors.

    Raises:
        InvalidArgumentError: If ``n`` is not positive.
    """
    if n < 1:
        raise InvalidArgumentError(f'n must be positive, got {n}')
    rng = np.random.default_rng(seed)
    mixture = params.mixture
    labels = rng.choice(mixture.k, size=n, p=mixture.weights)
    factors = np.stack([lower_cholesky(cov) for cov in mixture.covariances])
    noise = rng.standard_normal((n, mixture.q))
    latents = mixture.means[labels] + np.einsum(
        'nrs,ns->nr', factors[labels], noise,
    )
    loadings = params.loadings
    probs = expit(loadings.intercepts + latents @ loadings.matrix.T)
    rows = (rng.random((n, loadings.p)) < probs).astype(np.int64)
    patterns, inverse, counts = np.unique(
        rows, axis=0, return_inverse=True, return_counts=True,
    )
    return SampledData(
        data=PatternTable(patterns=patterns, counts=counts),
        labels=labels.astype(np.int64),
        latents=latents,
        pattern_index=inverse.reshape(-1).astype(np.int64),
    )
