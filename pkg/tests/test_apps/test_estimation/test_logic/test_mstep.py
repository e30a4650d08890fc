"""Tests for the M-step updates."""

import dataclasses
import math

import numpy as np
import pytest
from scipy.optimize import minimize
from scipy.special import log_expit, logsumexp

from factormix.apps.estimation.exceptions import ComponentCollapseError
from factormix.apps.estimation.logic.estep import e_step
from factormix.apps.estimation.logic.mstep import (
    expected_counts,
    expected_item_information,
    expected_item_loglik,
    expected_item_score,
    floor_eigenvalues,
    update_loadings,
    update_mixture,
)
from factormix.apps.estimation.models import FitConfig, FitDiagnostics
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    ModelSpec,
    PatternTable,
)
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.apps.quadrature.models import TensorGrid
from factormix.apps.simulation.logic.design import sample_responses


def _coefficients(params: ModelParams, item: int) -> np.ndarray:
    loadings = params.loadings
    return np.concatenate([[loadings.intercepts[item]], loadings.matrix[item]])


def _marginal_loglik(
    theta: np.ndarray,
    data: PatternTable,
    order: int,
) -> float:
    """Quadrature log-likelihood of a one-factor latent trait model."""
    abscissae, weights = np.polynomial.hermite.hermgauss(order)
    intercepts, slopes = np.split(theta, 2)
    linear = intercepts[:, np.newaxis] + np.outer(
        slopes, math.sqrt(2) * abscissae,
    )
    log_f = data.patterns @ log_expit(linear) + (
        1 - data.patterns
    ) @ log_expit(-linear)
    log_marginal = logsumexp(log_f, b=weights / math.sqrt(math.pi), axis=1)
    return float(data.counts @ log_marginal)


def _iterate_loadings(
    params: ModelParams,
    data: PatternTable,
    grid: TensorGrid,
) -> ModelParams:
    for _ in range(5000):
        estep = e_step(params, data, grid)
        loadings = update_loadings(params, data, estep, grid, FitConfig())
        change = np.abs(loadings.matrix - params.loadings.matrix).max() + (
            np.abs(loadings.intercepts - params.loadings.intercepts).max()
        )
        params = dataclasses.replace(params, loadings=loadings)
        if change < 1e-11:
            break
    return params


def _optimize(start: np.ndarray, data: PatternTable, order: int) -> np.ndarray:
    result = minimize(
        lambda theta: -_marginal_loglik(theta, data, order) / data.n,
        start,
        method='BFGS',
        options={'gtol': 1e-9},
    )
    return result.x


def test_expected_counts_add_up(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """Node totals spread exactly ``n`` observations."""
    estep = e_step(small_params, small_data, grid8)
    counts = expected_counts(small_data, estep)

    assert counts.points.shape == (16, 1)
    assert counts.totals.sum() == pytest.approx(small_data.n)
    assert counts.positives.sum(axis=0) == pytest.approx(
        small_data.counts @ small_data.patterns,
    )


def test_score_is_the_gradient(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """Central differences reproduce the analytic score."""
    estep = e_step(small_params, small_data, grid8)
    counts = expected_counts(small_data, estep)
    theta = _coefficients(small_params, 1)
    step = 1e-6

    numeric = [
        (
            expected_item_loglik(counts, 1, theta + step * unit)
            - expected_item_loglik(counts, 1, theta - step * unit)
        )
        / (2 * step)
        for unit in np.eye(2)
    ]

    np.testing.assert_allclose(
        expected_item_score(counts, 1, theta), numeric, rtol=1e-5, atol=1e-5,
    )


def test_information_is_the_negative_hessian(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """Differences of the score give the information back."""
    estep = e_step(small_params, small_data, grid8)
    counts = expected_counts(small_data, estep)
    theta = _coefficients(small_params, 2)
    step = 1e-6

    numeric = np.array([
        (
            expected_item_score(counts, 2, theta - step * unit)
            - expected_item_score(counts, 2, theta + step * unit)
        )
        / (2 * step)
        for unit in np.eye(2)
    ])

    np.testing.assert_allclose(
        expected_item_information(counts, 2, theta),
        numeric,
        rtol=1e-5,
        atol=1e-5,
    )


def test_balanced_item_stays_flat(grid8: TensorGrid) -> None:
    """Half positive answers and no signal leave a flat item alone."""
    params = ModelParams(
        loadings=Loadings.identified([0.0], [[0.0]]),
        mixture=MixtureParams.standard_normal(1),
        spec=ModelSpec(p=1, q=1, k=1),
    )
    data = PatternTable(patterns=[[0], [1]], counts=[5, 5])
    estep = e_step(params, data, grid8)

    loadings = update_loadings(params, data, estep, grid8, FitConfig())

    assert loadings.intercepts == pytest.approx([0.0], abs=1e-12)
    assert loadings.matrix == pytest.approx([[0.0]], abs=1e-12)


def test_masked_loadings_stay_zero(two_factor_params: ModelParams) -> None:
    """The upper triangle is never estimated."""
    data = sample_responses(two_factor_params, 200, seed=3).data
    grid = tensor_grid(2, 5)
    estep = e_step(two_factor_params, data, grid)

    loadings = update_loadings(
        two_factor_params, data, estep, grid, FitConfig(),
    )

    assert loadings.matrix[0, 1] == 0.0
    np.testing.assert_array_equal(
        loadings.zero_mask, two_factor_params.loadings.zero_mask,
    )


def test_loadings_update_does_not_decrease_objective(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """Every item's expected log-likelihood improves or stays."""
    estep = e_step(small_params, small_data, grid8)
    counts = expected_counts(small_data, estep)
    diagnostics = FitDiagnostics()

    loadings = update_loadings(
        small_params, small_data, estep, grid8, FitConfig(), diagnostics,
    )

    for item in range(4):
        before = expected_item_loglik(
            counts, item, _coefficients(small_params, item),
        )
        after = expected_item_loglik(
            counts,
            item,
            np.concatenate(
                [[loadings.intercepts[item]], loadings.matrix[item]],
            ),
        )
        assert after >= before
    assert diagnostics.gradient_fallbacks == 0


def test_update_loadings_rejects_other_grid(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """The grid must be the one the E-step used."""
    estep = e_step(small_params, small_data, grid8)

    with pytest.raises(ValueError, match='another grid'):
        update_loadings(
            small_params, small_data, estep, tensor_grid(1, 5), FitConfig(),
        )


def test_single_pattern_mixture_update(
    small_params: ModelParams,
    grid8: TensorGrid,
) -> None:
    """One pattern and one component give its posterior moments."""
    params = dataclasses.replace(
        small_params,
        mixture=MixtureParams.standard_normal(1),
        spec=ModelSpec(p=4, q=1, k=1),
    )
    data = PatternTable(patterns=[[1, 0, 1, 1]], counts=[5])
    estep = e_step(params, data, grid8)

    mixture = update_mixture(data, estep)

    mean = estep.cond_mean[0, 0, 0]
    assert mixture.weights == pytest.approx([1.0])
    assert mixture.means[0, 0] == pytest.approx(mean, rel=1e-12)
    assert mixture.covariances[0, 0, 0] == pytest.approx(
        estep.cond_second[0, 0, 0, 0] - mean**2, rel=1e-10,
    )


def test_mixture_update_keeps_weights_on_simplex(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """Weights are mean responsibilities."""
    estep = e_step(small_params, small_data, grid8)

    mixture = update_mixture(small_data, estep)

    expected = small_data.counts @ estep.responsibilities / small_data.n
    assert mixture.weights == pytest.approx(expected, rel=1e-12)


def test_collapsed_component(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """A component without responsibility cannot be updated."""
    estep = e_step(small_params, small_data, grid8)
    responsibilities = np.zeros_like(estep.responsibilities)
    responsibilities[:, 0] = 1.0

    with pytest.raises(ComponentCollapseError, match='Component 2') as error:
        update_mixture(
            small_data,
            dataclasses.replace(estep, responsibilities=responsibilities),
        )

    assert error.value.component == 1
    assert error.value.exit_code == 3


def test_floor_eigenvalues() -> None:
    """Negative directions are lifted to the ridge."""
    matrices = np.array([[[1.0, 0.0], [0.0, -2.0]], [[2.0, 1.0], [1.0, 2.0]]])

    floored = floor_eigenvalues(matrices, 1e-3)

    np.testing.assert_allclose(floored[0], np.diag([1.0, 1e-3]), atol=1e-14)
    np.testing.assert_allclose(floored[1], matrices[1], atol=1e-14)
    np.testing.assert_array_equal(floored, floored.transpose(0, 2, 1))


def test_loadings_reach_the_direct_maximum() -> None:
    """Repeated updates end where a generic optimizer ends."""
    truth = ModelParams(
        loadings=Loadings.identified([0.2, -0.4, 0.6], [[1.2], [0.9], [1.5]]),
        mixture=MixtureParams.standard_normal(1),
        spec=ModelSpec(p=3, q=1, k=1),
    )
    data = sample_responses(truth, 2000, seed=3).data
    start = np.array([0.2, -0.4, 0.6, 1.2, 0.9, 1.5])

    fitted = _iterate_loadings(truth, data, tensor_grid(1, 20))
    optimum = _optimize(start, data, 20)

    np.testing.assert_allclose(
        fitted.loadings.intercepts, optimum[:3], atol=1e-4,
    )
    np.testing.assert_allclose(
        fitted.loadings.matrix[:, 0], optimum[3:], atol=1e-4,
    )


def test_single_item_reaches_the_direct_maximum() -> None:
    """One item only fixes its marginal probability."""
    data = PatternTable.from_rows([[1]] * 30 + [[0]] * 70)
    start = ModelParams(
        loadings=Loadings.identified([0.0], [[1.0]]),
        mixture=MixtureParams.standard_normal(1),
        spec=ModelSpec(p=1, q=1, k=1),
    )
    grid = tensor_grid(1, 20)

    fitted = _iterate_loadings(start, data, grid)
    optimum = _optimize(np.array([0.0, 1.0]), data, 20)

    saturated = 30 * math.log(0.3) + 70 * math.log(0.7)
    assert e_step(fitted, data, grid).loglik == pytest.approx(
        saturated, abs=1e-4,
    )
    assert _marginal_loglik(optimum, data, 20) == pytest.approx(
        saturated, abs=1e-4,
    )
