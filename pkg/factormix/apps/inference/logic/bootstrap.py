"""Nonparametric bootstrap standard errors."""

import dataclasses
import logging
from typing import NamedTuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from factormix.apps.estimation.logic.fitting import fit
from factormix.apps.estimation.models import FitConfig
from factormix.apps.inference.exceptions import BootstrapFailureError
from factormix.apps.inference.models import BootstrapReport
from factormix.apps.modeling.models import (
    MixtureParams,
    ModelParams,
    ModelSpec,
    PatternTable,
)
from factormix.common.concurrency import run_ordered, spawn_seeds
from factormix.common.exceptions import FactorMixError, InvalidArgumentError
from factormix.common.typing import FloatArray, IntArray

logger = logging.getLogger(__name__)


class _Replicate(NamedTuple):
    permutation: IntArray
    intercepts: FloatArray
    loadings: FloatArray
    weights: FloatArray
    means: FloatArray
    covariances: FloatArray


def align_components(
    reference: MixtureParams,
    candidate: MixtureParams,
) -> IntArray:
    """Match candidate components to reference components.

    The matching minimizes the total Euclidean distance between matched
    component means.

    Returns:
        ``perm`` with ``perm[i]`` the candidate component matched to
        reference component ``i``.
    """
    if (reference.k, reference.q) != (candidate.k, candidate.q):
        raise InvalidArgumentError('mixtures differ in k or q')
    distances = np.linalg.norm(
        reference.means[:, np.newaxis, :] - candidate.means[np.newaxis],
        axis=2,
    )
    _, columns = linear_sum_assignment(distances)
    return columns.astype(np.int64)


def _resample(data: PatternTable, rows: IntArray, seed: int) -> PatternTable:
    rng = np.random.default_rng(seed)
    chosen = rng.integers(0, rows.shape[0], size=rows.shape[0])
    return PatternTable.from_rows(rows[chosen], data.item_names)


def _spread(estimates: list[FloatArray]) -> FloatArray:
    stacked = np.stack(estimates)
    return (stacked - stacked[0]).std(axis=0, ddof=1)


def bootstrap_standard_errors(
    data: PatternTable,
    spec: ModelSpec,
    cfg: FitConfig,
    B: int,  # noqa: N803
    point_estimate: ModelParams,
    workers: int = 1,
) -> BootstrapReport:
    """Standard errors from ``B`` refits on resampled observations.

    Every replicate resamples ``n`` observations with replacement, refits
    from ``point_estimate`` and is aligned to it before the spread of
    the estimates is measured.

    Args:
        data: Collapsed response patterns.
        spec: Model dimensions.
        cfg: Fit configuration of the refits.
        B: Number of replicates, at least 2.
        point_estimate: Fitted parameters on ``data``.
        workers: Threads used for replicates.

    Returns:
        The standard errors and failure counts.

    Raises:
        InvalidArgumentError: If ``B < 2`` or inputs disagree.
        BootstrapFailureError: If more than half of the refits failed.
    """
    if B < 2:
        raise InvalidArgumentError(f'B must be at least 2, got {B}')
    if point_estimate.spec != spec:
        raise InvalidArgumentError(
            'point estimate does not match the model dimensions',
        )
    rows = data.expand_rows()
    seeds = spawn_seeds(cfg.seed, B)

    def replicate(index: int) -> _Replicate | None:
        sample = _resample(data, rows, seeds[index])
        refit_cfg = dataclasses.replace(
            cfg, seed=seeds[index], n_starts=1, workers=1,
        )
        try:
            params = fit(sample, spec, refit_cfg, start=point_estimate).params
        except FactorMixError as error:
            logger.warning('Bootstrap refit %d failed: %s', index + 1, error)
            return None
        perm = align_components(point_estimate.mixture, params.mixture)
        mixture = params.mixture
        return _Replicate(
            permutation=perm,
            intercepts=params.loadings.intercepts,
            loadings=params.loadings.matrix,
            weights=mixture.weights[perm],
            means=mixture.means[perm],
            covariances=mixture.covariances[perm],
        )

    outcomes = run_ordered(replicate, range(B), workers)
    done = [outcome for outcome in outcomes if outcome is not None]
    n_failed = B - len(done)
    if 2 * n_failed > B or len(done) < 2:
        raise BootstrapFailureError(n_failed, B)
    logger.info('Bootstrap finished: %d of %d refits succeeded', len(done), B)
    return BootstrapReport(
        B=B,
        se_intercepts=_spread([outcome.intercepts for outcome in done]),
        se_loadings=_spread([outcome.loadings for outcome in done]),
        n_failed=n_failed,
        alignment_permutations=np.stack(
            [outcome.permutation for outcome in done],
        ),
        se_weights=_spread([outcome.weights for outcome in done]),
        se_means=_spread([outcome.means for outcome in done]),
        se_covariances=_spread([outcome.covariances for outcome in done]),
    )
