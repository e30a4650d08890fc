"""Generalized EM fit of the factor mixture model."""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Final, final

import numpy as np
from scipy.special import logit

from factormix.apps.estimation.exceptions import FitError, InitializationError
from factormix.apps.estimation.logic.estep import e_step
from factormix.apps.estimation.logic.mstep import (
    update_loadings,
    update_mixture,
)
from factormix.apps.estimation.logic.standardization import (
    standardize,
    standardize_mixture,
)
from factormix.apps.estimation.models import (
    EStepResult,
    FitConfig,
    FitDiagnostics,
    FitResult,
)
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    ModelSpec,
    PatternTable,
)
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.apps.quadrature.models import TensorGrid
from factormix.apps.selection.logic.criteria import information_criteria
from factormix.common.concurrency import run_ordered, spawn_seeds
from factormix.common.exceptions import (
    InvalidArgumentError,
    NumericalDegeneracyError,
)

#: Largest log-likelihood decrease an accepted iteration may show.
ASCENT_TOLERANCE: Final = 1e-8

_MAX_BACKTRACKS: Final = 10
_PROPORTION_CLIP: Final = (0.025, 0.975)
_START_LOADING: Final = 1.0
_START_JITTER: Final = 0.1
_START_COVARIANCE: Final = 0.5

logger = logging.getLogger(__name__)


@final
@dataclass(frozen=True, eq=False)
class _Run:
    params: ModelParams
    estep: EStepResult
    trace: list[float]
    converged: bool


def _check_inputs(data: PatternTable, spec: ModelSpec) -> None:
    spec.require_identifiable()
    if data.p != spec.p:
        raise InvalidArgumentError(
            f'data has {data.p} items, model expects {spec.p}',
        )


def _blend(
    previous: MixtureParams,
    target: MixtureParams,
    share: float,
) -> MixtureParams:
    return MixtureParams(
        weights=target.weights,
        means=previous.means + share * (target.means - previous.means),
        covariances=previous.covariances
        + share * (target.covariances - previous.covariances),
    )


def _evaluate(
    params: ModelParams,
    loadings: Loadings,
    mixture: MixtureParams,
    data: PatternTable,
    grid: TensorGrid,
) -> tuple[ModelParams, EStepResult]:
    candidate = standardize(
        ModelParams(loadings=loadings, mixture=mixture, spec=params.spec),
    )
    return candidate, e_step(candidate, data, grid)


def _mixture_step(
    params: ModelParams,
    loadings: Loadings,
    target: MixtureParams,
    data: PatternTable,
    grid: TensorGrid,
    floor: float,
    diagnostics: FitDiagnostics,
) -> tuple[ModelParams, EStepResult]:
    """Accept the moment update, or a damped one if it loses likelihood.

    The last resort keeps the previous means and covariances; the new
    weights and loadings alone never decrease the likelihood.
    """
    for halving in range(_MAX_BACKTRACKS + 1):
        candidate, estep = _evaluate(
            params, loadings, _blend(params.mixture, target, 0.5**halving),
            data, grid,
        )
        if estep.loglik >= floor:
            return candidate, estep
        diagnostics.mixture_backtracks += 1
    return _evaluate(
        params, loadings, _blend(params.mixture, target, 0), data, grid,
    )


def run_gem(
    params: ModelParams,
    data: PatternTable,
    grid: TensorGrid,
    cfg: FitConfig,
    diagnostics: FitDiagnostics | None = None,
    *,
    pin_mixture: bool = False,
) -> tuple[ModelParams, EStepResult, list[float], bool]:
    """Iterate GEM steps from ``params`` until the likelihood settles.

    Args:
        params: Starting parameters.
        data: Collapsed response patterns.
        grid: Untransformed grid for ``q`` factors.
        cfg: Fit configuration.
        diagnostics: Receives safeguard counters.
        pin_mixture: Keep the mixture fixed and update loadings only.

    Returns:
        Final parameters, their E-step, the log-likelihood trace and
        whether the tolerance was reached.

    Raises:
        ComponentCollapseError: If a component loses its responsibility.
        NumericalDegeneracyError: On singular covariances.
    """
    diagnostics = diagnostics if diagnostics is not None else FitDiagnostics()
    estep = e_step(params, data, grid)
    trace = [estep.loglik]
    for iteration in range(1, cfg.max_iter + 1):
        loadings = update_loadings(params, data, estep, grid, cfg, diagnostics)
        floor = trace[-1] - ASCENT_TOLERANCE
        if pin_mixture:
            candidate = ModelParams(loadings, params.mixture, params.spec)
            new_estep = e_step(candidate, data, grid)
        else:
            candidate, new_estep = _mixture_step(
                params,
                loadings,
                update_mixture(data, estep, cfg.ridge),
                data,
                grid,
                floor,
                diagnostics,
            )
        if new_estep.loglik < floor:
            logger.warning(
                'Iteration %d lost likelihood after every safeguard, stopping',
                iteration,
            )
            diagnostics.stalls += 1
            return params, estep, trace, False
        params, estep = candidate, new_estep
        trace.append(estep.loglik)
        logger.debug(
            'Iteration %d log-likelihood %.8f', iteration, estep.loglik,
        )
        if abs(trace[-1] - trace[-2]) < cfg.epsilon:
            return params, estep, trace, True
    return params, estep, trace, False


def _starting_loadings(data: PatternTable, q: int, seed: int) -> Loadings:
    rng = np.random.default_rng(seed)
    proportions = (data.counts @ data.patterns) / data.n
    intercepts = logit(np.clip(proportions, *_PROPORTION_CLIP))
    matrix = _START_LOADING + _START_JITTER * rng.standard_normal((data.p, q))
    return Loadings.identified(intercepts, matrix)


def latent_trait_loadings(
    data: PatternTable,
    q: int,
    cfg: FitConfig,
) -> Loadings:
    """Loadings of the single-component model with ``N(0, I)`` factors.

    Raises:
        InitializationError: If the pre-fit fails numerically.
    """
    prefit_seed = spawn_seeds(cfg.seed, 2)[0]
    start = ModelParams(
        loadings=_starting_loadings(data, q, prefit_seed),
        mixture=MixtureParams.standard_normal(q),
        spec=ModelSpec(p=data.p, q=q, k=1),
    )
    try:
        params, *_ = run_gem(
            start, data, tensor_grid(q, cfg.quad_points), cfg,
            pin_mixture=True,
        )
    except NumericalDegeneracyError as error:
        raise InitializationError(
            f'single-component pre-fit failed: {error}',
        ) from error
    return params.loadings


def initialize(
    data: PatternTable,
    spec: ModelSpec,
    cfg: FitConfig,
    base_loadings: Loadings | None = None,
) -> ModelParams:
    """Starting values for a fit.

    The loadings come from the single-component model. Component means
    are drawn from ``N(0, I)``, covariances set to ``0.5 I`` and weights
    to ``1 / k`` before the mixture is standardized.

    Args:
        data: Collapsed response patterns.
        spec: Model dimensions.
        cfg: Fit configuration; ``cfg.seed`` drives the draws.
        base_loadings: Pre-computed single-component loadings.

    Returns:
        Standardized starting parameters.

    Raises:
        InitializationError: If the single-component pre-fit fails.
    """
    _check_inputs(data, spec)
    loadings = base_loadings
    if loadings is None:
        loadings = latent_trait_loadings(data, spec.q, cfg)
    if spec.k == 1:
        mixture = MixtureParams.standard_normal(spec.q)
    else:
        rng = np.random.default_rng(spawn_seeds(cfg.seed, 2)[1])
        mixture, _, _ = standardize_mixture(
            MixtureParams(
                weights=np.full(spec.k, 1 / spec.k),
                means=rng.standard_normal((spec.k, spec.q)),
                covariances=np.tile(
                    _START_COVARIANCE * np.eye(spec.q), (spec.k, 1, 1),
                ),
            ),
        )
    return ModelParams(loadings=loadings, mixture=mixture, spec=spec)


def _run_start(
    data: PatternTable,
    grid: TensorGrid,
    cfg: FitConfig,
    params: ModelParams,
    diagnostics: FitDiagnostics,
) -> _Run:
    fitted, estep, trace, converged = run_gem(
        params, data, grid, cfg, diagnostics,
    )
    return _Run(params=fitted, estep=estep, trace=trace, converged=converged)


def fit(
    data: PatternTable,
    spec: ModelSpec,
    cfg: FitConfig | None = None,
    start: ModelParams | None = None,
) -> FitResult:
    """Fit a factor mixture model by generalized EM.

    Every start runs until the absolute change of the log-likelihood
    drops below ``cfg.epsilon`` or ``cfg.max_iter`` is reached; the start
    with the highest final log-likelihood wins, ties going to the lowest
    start index.

    Args:
        data: Collapsed response patterns.
        spec: Model dimensions.
        cfg: Fit configuration, defaults to :class:`FitConfig`.
        start: Warm start; replaces the random starts.

    Returns:
        The best fit.

    Raises:
        InvalidArgumentError: On inconsistent inputs.
        InitializationError: If the single-component pre-fit fails.
        FitError: If every start failed.
    """
    cfg = cfg or FitConfig()
    _check_inputs(data, spec)
    if start is not None and start.spec != spec:
        raise InvalidArgumentError(
            'warm start does not match the model dimensions',
        )
    grid = tensor_grid(spec.q, cfg.quad_points)
    logger.info(
        'Fitting p=%d q=%d k=%d to %d observations from %d start(s)',
        spec.p,
        spec.q,
        spec.k,
        data.n,
        1 if start is not None else cfg.n_starts,
    )
    if start is not None:
        starts = [start]
    else:
        base = latent_trait_loadings(data, spec.q, cfg)
        starts = [
            initialize(
                data, spec, dataclasses.replace(cfg, seed=seed), base,
            )
            for seed in spawn_seeds(cfg.seed, cfg.n_starts)
        ]
    per_start = [FitDiagnostics() for _ in starts]

    def attempt(index: int) -> _Run | str:
        try:
            return _run_start(data, grid, cfg, starts[index], per_start[index])
        except NumericalDegeneracyError as error:
            logger.warning('Start %d failed: %s', index + 1, error)
            return str(error)

    outcomes = run_ordered(attempt, range(len(starts)), cfg.workers)
    diagnostics = FitDiagnostics()
    best: _Run | None = None
    for index, outcome in enumerate(outcomes):
        diagnostics.merge(per_start[index])
        if isinstance(outcome, str):
            diagnostics.failed_starts.append((index, outcome))
        elif best is None or outcome.trace[-1] > best.trace[-1]:
            best, diagnostics.best_start = outcome, index
    if best is None:
        raise FitError(diagnostics.failed_starts)

    loglik = best.trace[-1]
    logger.info(
        'Fit finished after %d iterations, log-likelihood %.6f',
        len(best.trace) - 1,
        loglik,
    )
    return FitResult(
        params=best.params,
        loglik_trace=np.array(best.trace),
        converged=best.converged,
        n_iter=len(best.trace) - 1,
        posteriors=best.estep.responsibilities,
        criteria=information_criteria(loglik, spec.n_free_parameters, data.n),
        config=cfg,
        diagnostics=diagnostics,
    )
