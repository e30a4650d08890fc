"""Forward selection of the number of factors, then of components."""

import logging
import math
from typing import Final

from factormix.apps.estimation.logic.fitting import fit
from factormix.apps.estimation.models import FitConfig, FitResult
from factormix.apps.modeling.logic.identifiability import (
    ledermann_max_factors,
)
from factormix.apps.modeling.models import ModelSpec, PatternTable
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.apps.selection.exceptions import SelectionFailedError
from factormix.apps.selection.logic.goodness import (
    bivariate_residuals,
    pattern_fit_tests,
)
from factormix.apps.selection.models import CandidateRecord, SelectionResult
from factormix.common.concurrency import run_ordered
from factormix.common.exceptions import FactorMixError, InvalidArgumentError

#: Criteria ``forward_select`` can rank components by.
CRITERIA: Final = ('aic', 'bic')

logger = logging.getLogger(__name__)


def evaluate_candidate(
    data: PatternTable,
    spec: ModelSpec,
    cfg: FitConfig,
    threshold: float = 4.0,
) -> tuple[CandidateRecord, FitResult | None]:
    """Fit one candidate and summarize it for the selection trace.

    A failed fit becomes a record carrying the failure reason.
    """
    try:
        result = fit(data, spec, cfg)
    except FactorMixError as error:
        logger.warning(
            'Candidate q=%d k=%d failed: %s', spec.q, spec.k, error,
        )
        record = CandidateRecord(
            q=spec.q,
            k=spec.k,
            loglik=math.nan,
            n_par=spec.n_free_parameters,
            aic=math.inf,
            bic=math.inf,
            max_residual=math.inf,
            converged=False,
            failure=str(error),
        )
        return record, None
    grid = tensor_grid(spec.q, cfg.quad_points)
    residuals = bivariate_residuals(result.params, data, grid, threshold)
    tests = pattern_fit_tests(result.params, data, grid)
    record = CandidateRecord(
        q=spec.q,
        k=spec.k,
        loglik=result.loglik,
        n_par=result.n_free_parameters,
        aic=result.criteria.aic,
        bic=result.criteria.bic,
        max_residual=residuals.max_residual,
        gf=tests.gf,
        lr=tests.lr,
        df=tests.df,
        converged=result.converged,
    )
    return record, result


def forward_select(
    data: PatternTable,
    q_max: int,
    k_max: int,
    cfg: FitConfig | None = None,
    *,
    criterion: str = 'aic',
    threshold: float = 4.0,
    workers: int = 1,
) -> SelectionResult:
    """Choose ``q`` by the bivariate residual screen, then ``k``.

    Factor counts are tried from 1 upwards. At each ``q`` every
    ``k = 1..k_max`` is fitted; the first ``q`` where some candidate keeps
    its largest residual within ``threshold`` is kept, and ``k`` is the
    successful candidate at that ``q`` minimizing ``criterion``.

    Args:
        data: Collapsed response patterns.
        q_max: Largest factor count to try.
        k_max: Largest component count to try.
        cfg: Fit configuration shared by all candidates.
        criterion: ``aic`` or ``bic``.
        threshold: Largest acceptable bivariate residual.
        workers: Threads used for the candidates of one ``q``.

    Returns:
        The chosen pair with the trace of every candidate.

    Raises:
        InvalidArgumentError: On an unknown criterion or bad bounds.
        SelectionFailedError: If no ``q <= q_max`` passes the screen.
    """
    cfg = cfg or FitConfig()
    if criterion not in CRITERIA:
        raise InvalidArgumentError(f'unknown criterion {criterion!r}')
    if q_max < 1 or k_max < 1:
        raise InvalidArgumentError('q_max and k_max must be positive')
    if q_max > ledermann_max_factors(data.p):
        raise InvalidArgumentError(
            f'q_max={q_max} exceeds the Ledermann bound for p={data.p}',
        )

    trace: list[CandidateRecord] = []
    fits: dict[tuple[int, int], FitResult] = {}
    for q in range(1, q_max + 1):
        candidates = run_ordered(
            lambda k, q=q: evaluate_candidate(
                data, ModelSpec(p=data.p, q=q, k=k), cfg, threshold,
            ),
            range(1, k_max + 1),
            workers,
        )
        for record, result in candidates:
            trace.append(record)
            if result is not None:
                fits[record.q, record.k] = result
        fitted = [record for record, _ in candidates if not record.failed]
        if any(record.max_residual <= threshold for record in fitted):
            chosen = min(fitted, key=lambda record: record.criterion(criterion))
            logger.info(
                'Selected q=%d k=%d by %s', chosen.q, chosen.k, criterion,
            )
            return SelectionResult(
                chosen_q=chosen.q,
                chosen_k=chosen.k,
                trace=tuple(trace),
                criterion=criterion,
                threshold=threshold,
                fits=fits,
            )
        logger.info('No candidate with q=%d passed the residual screen', q)
    raise SelectionFailedError(trace, q_max, threshold)
