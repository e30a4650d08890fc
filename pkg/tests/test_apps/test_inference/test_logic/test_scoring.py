"""Tests for classification and factor scores."""

import numpy as np
import pytest

from factormix.apps.estimation.logic.estep import (
    e_step,
    pattern_probabilities,
)
from factormix.apps.inference.logic.scoring import (
    allocation_table,
    classify_map,
    factor_scores,
    weighted_loadings,
)
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    PatternTable,
)
from factormix.apps.quadrature.logic.gauss_hermite import tensor_grid
from factormix.apps.quadrature.models import TensorGrid
from factormix.common.exceptions import InvalidArgumentError


def test_classify_map_breaks_ties_low() -> None:
    """Equal posteriors go to the first component."""
    posteriors = np.array([[0.2, 0.4, 0.4], [0.6, 0.3, 0.1]])

    np.testing.assert_array_equal(classify_map(posteriors), [1, 0])


def test_classify_map_rejects_vectors() -> None:
    """Posteriors come as a matrix."""
    with pytest.raises(InvalidArgumentError):
        classify_map(np.array([0.5, 0.5]))



def test_scores_match_dense_integration(
    three_item_params: ModelParams,
    all_pattern_data: PatternTable,
    dense_moments,
) -> None:
    """Factor scores are posterior means over the whole mixture."""
    weights = three_item_params.mixture.weights
    expected = []
    for row in all_pattern_data.patterns:
        moments = dense_moments(three_item_params, row)
        expected.append(weights @ moments[:, 1] / (weights @ moments[:, 0]))

    scores = factor_scores(
        three_item_params, all_pattern_data, tensor_grid(1, 40),
    )

    np.testing.assert_allclose(scores[:, 0], expected, atol=1e-8)


def test_scores_average_component_means(
    small_params: ModelParams,
    small_data: PatternTable,
    grid8: TensorGrid,
) -> None:
    """Scores mix the conditional means by responsibility."""
    estep = e_step(small_params, small_data, grid8)

    scores = factor_scores(small_params, small_data, grid8)

    assert scores.shape == (small_data.n_patterns, 1)
    expected = (estep.responsibilities * estep.cond_mean[:, :, 0]).sum(axis=1)
    np.testing.assert_allclose(scores[:, 0], expected, rtol=1e-12)


def test_scores_average_to_zero(
    small_params: ModelParams,
    grid8: TensorGrid,
) -> None:
    """Over the model's own pattern distribution scores have mean zero."""
    patterns = np.array(
        [[int(bit) for bit in f'{index:04b}'] for index in range(16)],
    )
    data = PatternTable(patterns=patterns, counts=np.ones(16, dtype=np.int64))
    probs = pattern_probabilities(small_params, patterns, grid8)

    scores = factor_scores(small_params, data, grid8)

    assert probs @ scores[:, 0] == pytest.approx(0.0, abs=1e-12)


def test_weighted_loadings(two_component_mixture: MixtureParams) -> None:
    """Loadings times component means."""
    loadings = Loadings.identified([0.0, 0.0], [[1.0], [-2.0]])

    profiles = weighted_loadings(loadings, two_component_mixture)

    spread = two_component_mixture.means[1, 0]
    np.testing.assert_allclose(
        profiles, [[-spread, 2 * spread], [spread, -2 * spread]],
    )


def test_weighted_loadings_dimension_mismatch(
    two_component_mixture: MixtureParams,
) -> None:
    """Loadings and mixture need the same factors."""
    loadings = Loadings.identified([0.0, 0.0], [[1.0, 0.0], [0.5, 1.0]])

    with pytest.raises(InvalidArgumentError):
        weighted_loadings(loadings, two_component_mixture)


def test_allocation_table() -> None:
    """One row per pattern, clusters numbered from one."""
    data = PatternTable(patterns=[[0, 1], [1, 1]], counts=[3, 7])
    posteriors = np.array([[0.9, 0.1], [0.25, 0.75]])

    table = allocation_table(data, posteriors)

    assert list(table.columns) == [
        'pattern', 'count', 'cluster', 'posterior_1', 'posterior_2',
    ]
    assert table['pattern'].tolist() == ['01', '11']
    assert table['count'].tolist() == [3, 7]
    assert table['cluster'].tolist() == [1, 2]
    assert table['posterior_2'].tolist() == [0.1, 0.75]


def test_allocation_table_row_mismatch() -> None:
    """Posteriors must cover every pattern."""
    data = PatternTable(patterns=[[0, 1], [1, 1]], counts=[3, 7])

    with pytest.raises(InvalidArgumentError):
        allocation_table(data, np.ones((1, 2)))
