"""Replicated Monte-Carlo studies."""

import dataclasses
import logging
import math

import numpy as np

from factormix.apps.estimation.models import FitConfig, FitResult
from factormix.apps.inference.logic.scoring import classify_map
from factormix.apps.modeling.models import ModelSpec
from factormix.apps.selection.logic.forward import (
    CRITERIA,
    evaluate_candidate,
)
from factormix.apps.selection.models import CandidateRecord
from factormix.apps.simulation.logic.design import sample_responses
from factormix.apps.simulation.logic.scoring import misclassification_error
from factormix.apps.simulation.models import (
    ReplicateOutcome,
    SimDesign,
    StudySummary,
)
from factormix.common.concurrency import run_ordered, spawn_seeds
from factormix.common.exceptions import FactorMixError, InvalidArgumentError
from factormix.common.typing import FloatArray

logger = logging.getLogger(__name__)


def _chosen_k(
    records: list[CandidateRecord],
    q: int | None,
    criterion: str,
) -> int | None:
    fitted = [
        record for record in records if record.q == q and not record.failed
    ]
    if not fitted:
        return None
    return min(fitted, key=lambda record: record.criterion(criterion)).k


def _replicate(
    design: SimDesign,
    cfg: FitConfig,
    seed: int,
    q_max: int,
    k_max: int,
    threshold: float,
) -> ReplicateOutcome:
    """Sample, fit every candidate and score the fit at the true model."""
    sample = sample_responses(design.true_params, design.n, seed)
    records: list[CandidateRecord] = []
    fits: dict[tuple[int, int], FitResult | None] = {}
    for q in range(1, q_max + 1):
        for k in range(1, k_max + 1):
            spec = ModelSpec(p=design.spec.p, q=q, k=k)
            record, result = evaluate_candidate(
                sample.data, spec, cfg, threshold,
            )
            records.append(record)
            fits[q, k] = result
    screen = {
        q: any(
            record.max_residual <= threshold
            for record in records
            if record.q == q and not record.failed
        )
        for q in range(1, q_max + 1)
    }
    selected_q = next((q for q, passed in screen.items() if passed), None)

    true = design.spec
    truth_fit = fits.get((true.q, true.k))
    if truth_fit is None:
        raise FactorMixError(
            f'no fit at the true model q={true.q} k={true.k}',
        )
    estimated = classify_map(truth_fit.posteriors)[sample.pattern_index]
    return ReplicateOutcome(
        screen=screen,
        chosen_k={
            criterion: _chosen_k(records, selected_q, criterion)
            for criterion in CRITERIA
        },
        intercepts=truth_fit.params.loadings.intercepts,
        loadings=truth_fit.params.loadings.matrix,
        misclassification=misclassification_error(
            sample.labels, estimated, true.k,
        ),
    )


def _moments(
    estimates: list[FloatArray],
    truth: FloatArray,
) -> tuple[FloatArray, FloatArray]:
    if not estimates:
        empty = np.full(truth.shape, math.nan)
        return empty, empty.copy()
    stacked = np.stack(estimates)
    rmse = np.sqrt(((stacked - truth) ** 2).mean(axis=0))
    return stacked.mean(axis=0), rmse


def run_study(
    design: SimDesign,
    cfg: FitConfig | None = None,
    *,
    q_max: int | None = None,
    k_max: int | None = None,
    threshold: float = 4.0,
    workers: int = 1,
) -> StudySummary:
    """Run every replicate of ``design`` and aggregate the results.

    Each replicate fits all ``q = 1..q_max`` and ``k = 1..k_max``. The
    residual screen is recorded for every ``q``; ``k`` is chosen by each
    criterion at the first ``q`` passing the screen. Misclassification
    and parameter recovery come from the fit at the true ``(q, k)``.

    Args:
        design: Simulation design.
        cfg: Fit configuration of every candidate fit.
        q_max: Largest factor count, defaults to the true one.
        k_max: Largest component count, defaults to the true one plus 1.
        threshold: Largest acceptable bivariate residual.
        workers: Threads used for replicates.

    Returns:
        The study summary; failed replicates are counted, not averaged.
    """
    cfg = cfg or FitConfig()
    true = design.spec
    q_max = q_max or true.q
    k_max = k_max or true.k + 1
    if q_max < true.q or k_max < true.k:
        raise InvalidArgumentError('candidate ranges must cover the truth')
    seeds = spawn_seeds(design.seed, design.n_reps)

    def replicate(index: int) -> ReplicateOutcome | None:
        rep_cfg = dataclasses.replace(cfg, seed=seeds[index], workers=1)
        try:
            return _replicate(
                design, rep_cfg, seeds[index], q_max, k_max, threshold,
            )
        except FactorMixError as error:
            logger.warning('Replicate %d failed: %s', index + 1, error)
            return None

    outcomes = run_ordered(replicate, range(design.n_reps), workers)
    done = [outcome for outcome in outcomes if outcome is not None]
    completed = len(done)
    logger.info(
        'Study finished: %d replicates completed, %d failed',
        completed,
        design.n_reps - completed,
    )

    def share(count: int) -> float:
        return count / completed if completed else 0.0

    misclassification = np.array(
        [outcome.misclassification for outcome in done],
    )
    loadings = design.true_params.loadings
    intercept_means, intercept_rmse = _moments(
        [outcome.intercepts for outcome in done], loadings.intercepts,
    )
    loading_means, loading_rmse = _moments(
        [outcome.loadings for outcome in done], loadings.matrix,
    )
    return StudySummary(
        design=design,
        n_completed=completed,
        n_failed=design.n_reps - completed,
        q_selection_rates={
            q: share(sum(outcome.screen[q] for outcome in done))
            for q in range(1, q_max + 1)
        },
        k_selection_rates={
            criterion: {
                k: share(
                    sum(outcome.chosen_k[criterion] == k for outcome in done),
                )
                for k in range(1, k_max + 1)
            }
            for criterion in CRITERIA
        },
        intercept_means=intercept_means,
        intercept_rmse=intercept_rmse,
        loading_means=loading_means,
        loading_rmse=loading_rmse,
        misclassification=misclassification,
        misclass_mean=(
            float(misclassification.mean()) if completed else math.nan
        ),
        misclass_se=(
            float(misclassification.std(ddof=1) / math.sqrt(completed))
            if completed > 1
            else math.nan
        ),
    )
