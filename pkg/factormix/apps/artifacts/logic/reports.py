"""Plain-text report tables.

Every number is printed with 6 significant digits and components are
numbered from 1.
"""

from collections.abc import Sequence

import numpy as np
import pandas as pd

from factormix.apps.artifacts.models import FitArtifact
from factormix.apps.inference.logic.scoring import (
    allocation_table,
    weighted_loadings,
)
from factormix.apps.inference.models import BootstrapReport
from factormix.apps.modeling.models import MixtureParams, ModelParams
from factormix.apps.selection.models import (
    BivariateResidualReport,
    SelectionResult,
)
from factormix.apps.simulation.models import StudySummary
from factormix.common.typing import FloatArray


def number(value: float) -> str:
    """Format a number with 6 significant digits.

    >>> number(5440.514), number(0.000123456789)
    ('5440.51', '0.000123457')
    """
    return f'{value:.6g}'


def render(table: pd.DataFrame) -> str:
    """Aligned plain-text rendering without the index."""
    return table.to_string(index=False, float_format=number)


def _columns(prefix: str, count: int) -> list[str]:
    return [f'{prefix}{index + 1}' for index in range(count)]


def parameter_table(params: ModelParams, item_names: Sequence[str]) -> str:
    """Intercepts and loadings, one row per item."""
    table = pd.DataFrame({
        'item': list(item_names),
        'intercept': params.loadings.intercepts,
    })
    loadings = params.loadings.matrix
    for column, name in enumerate(_columns('loading', params.spec.q)):
        table[name] = loadings[:, column]
    return render(table)


def mixture_table(mixture: MixtureParams) -> str:
    """Weights, means and covariance entries, one row per component."""
    table = pd.DataFrame({
        'component': np.arange(1, mixture.k + 1),
        'weight': mixture.weights,
    })
    for column, name in enumerate(_columns('mean', mixture.q)):
        table[name] = mixture.means[:, column]
    rows, cols = np.triu_indices(mixture.q)
    for row, col in zip(rows, cols, strict=True):
        table[f'cov{row + 1}{col + 1}'] = mixture.covariances[:, row, col]
    return render(table)


def weighted_loadings_table(
    params: ModelParams,
    item_names: Sequence[str],
) -> str:
    """Cluster profiles ``Lambda mu_i``, one column per component."""
    profiles = weighted_loadings(params.loadings, params.mixture)
    table = pd.DataFrame({'item': list(item_names)})
    for component, name in enumerate(_columns('cluster', params.spec.k)):
        table[name] = profiles[component]
    return render(table)


def fit_report(artifact: FitArtifact) -> str:
    """Summary printed by the ``fit`` command."""
    spec = artifact.params.spec
    tests = artifact.tests
    summary = pd.DataFrame({
        'statistic': [
            'loglik', 'n_par', 'AIC', 'BIC', 'GF', 'LR', 'df',
            'max_residual', 'iterations', 'converged',
        ],
        'value': [
            number(artifact.loglik),
            str(spec.n_free_parameters),
            number(artifact.criteria.aic),
            number(artifact.criteria.bic),
            number(tests.gf),
            number(tests.lr),
            str(tests.df),
            number(artifact.residuals.max_residual),
            str(artifact.n_iter),
            str(artifact.converged),
        ],
    })
    sections = [
        f'Model: p={spec.p} q={spec.q} k={spec.k}, n={artifact.data.n}',
        render(summary),
        f'df convention: {tests.convention}',
        'Measurement model:',
        parameter_table(artifact.params, artifact.data.item_names),
        'Mixture:',
        mixture_table(artifact.params.mixture),
    ]
    if spec.k > 1:
        sections.extend([
            'Weighted loadings:',
            weighted_loadings_table(artifact.params, artifact.data.item_names),
        ])
    constant = artifact.data.constant_items()
    if constant:
        names = ', '.join(artifact.data.item_names[item] for item in constant)
        sections.append(f'Constant items: {names}')
    return '\n'.join(sections)


def selection_report(result: SelectionResult) -> str:
    """Trace of every candidate visited by forward selection."""
    table = pd.DataFrame([
        {
            'q': record.q,
            'k': record.k,
            'loglik': record.loglik,
            'n_par': record.n_par,
            'AIC': record.aic,
            'BIC': record.bic,
            'GF': record.gf,
            'LR': record.lr,
            'df': record.df,
            'max_residual': record.max_residual,
            'status': record.failure or (
                'converged' if record.converged else 'max_iter'
            ),
        }
        for record in result.trace
    ])
    return '\n'.join([
        render(table),
        f'Selected q={result.chosen_q} k={result.chosen_k} '
        f'by {result.criterion.upper()} '
        f'(residual threshold {number(result.threshold)})',
    ])


def residual_report(report: BivariateResidualReport) -> str:
    """Greatest residual per cell and every residual above threshold."""
    names = report.item_names

    def label(item: int) -> str:
        return names[item] if names else str(item + 1)

    greatest = pd.DataFrame(
        [
            {
                'cell': f'{cell[0]}{cell[1]}',
                'pair': f'{label(first)}-{label(second)}',
                'residual': residual,
            }
            for cell, first, second, residual in report.greatest_by_cell()
        ],
        columns=['cell', 'pair', 'residual'],
    )
    large = pd.DataFrame(
        [
            {
                'pair': f'{label(first)}-{label(second)}',
                'cell': f'{cell[0]}{cell[1]}',
                'residual': residual,
            }
            for first, second, cell, residual in report.large()
        ],
        columns=['pair', 'cell', 'residual'],
    )
    sections = [
        f'Max bivariate residual: {number(report.max_residual)} '
        f'(threshold {number(report.threshold)})',
        'Greatest residual per cell:',
        render(greatest),
    ]
    if large.empty:
        sections.append('No residual above the threshold')
    else:
        sections.extend(['Residuals above the threshold:', render(large)])
    if report.unstable.any():
        sections.append(
            f'{int(report.unstable.sum())} cell(s) with expected count '
            'below 1e-12 were not divided',
        )
    return '\n'.join(sections)


def score_report(artifact: FitArtifact, scores: FloatArray) -> str:
    """Per-pattern MAP cluster, posteriors and factor scores."""
    table = allocation_table(artifact.data, artifact.posteriors)
    for column, name in enumerate(_columns('score', scores.shape[1])):
        table[name] = scores[:, column]
    return render(table)


def _with_errors(values: FloatArray, errors: FloatArray) -> list[str]:
    return [
        f'{number(value)} ({number(error)})'
        for value, error in zip(values, errors, strict=True)
    ]


def bootstrap_report(
    params: ModelParams,
    report: BootstrapReport,
    item_names: Sequence[str],
) -> str:
    """Estimates with bootstrap standard errors in brackets."""
    table = pd.DataFrame({
        'item': list(item_names),
        'intercept': _with_errors(
            params.loadings.intercepts, report.se_intercepts,
        ),
    })
    for column, name in enumerate(_columns('loading', params.spec.q)):
        table[name] = _with_errors(
            params.loadings.matrix[:, column], report.se_loadings[:, column],
        )
    mixture = pd.DataFrame({
        'component': np.arange(1, params.spec.k + 1),
        'weight': _with_errors(params.mixture.weights, report.se_weights),
    })
    for column, name in enumerate(_columns('mean', params.spec.q)):
        mixture[name] = _with_errors(
            params.mixture.means[:, column], report.se_means[:, column],
        )
    return '\n'.join([
        f'Bootstrap: B={report.B}, {report.n_failed} failed refit(s)',
        render(table),
        'Mixture (supplementary):',
        render(mixture),
    ])


def study_report(summary: StudySummary) -> str:
    """Selection rates, parameter recovery and misclassification."""
    spec = summary.design.spec
    rates = pd.DataFrame({
        'q': list(summary.q_selection_rates),
        'screen_pass_rate': list(summary.q_selection_rates.values()),
    })
    k_rates = pd.DataFrame({'k': list(summary.k_selection_rates['aic'])})
    for criterion, by_k in summary.k_selection_rates.items():
        k_rates[criterion.upper()] = list(by_k.values())
    truth = summary.design.true_params.loadings
    recovery = pd.DataFrame({
        'item': _columns('item', spec.p),
        'true_intercept': truth.intercepts,
        'mean_intercept': summary.intercept_means,
        'rmse_intercept': summary.intercept_rmse,
    })
    for column in range(spec.q):
        suffix = column + 1
        recovery[f'true_loading{suffix}'] = truth.matrix[:, column]
        recovery[f'mean_loading{suffix}'] = summary.loading_means[:, column]
        recovery[f'rmse_loading{suffix}'] = summary.loading_rmse[:, column]
    return '\n'.join([
        f'Design: p={spec.p} q={spec.q} k={spec.k}, '
        f'n={summary.design.n}, replicates={summary.design.n_reps}',
        f'Completed: {summary.n_completed}, failed: {summary.n_failed}',
        'Residual screen:',
        render(rates),
        'Selected k:',
        render(k_rates),
        'Parameter recovery:',
        render(recovery),
        f'Misclassification: mean {number(summary.misclass_mean)}, '
        f'se {number(summary.misclass_se)}',
    ])
