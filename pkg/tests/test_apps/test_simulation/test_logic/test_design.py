"""Tests for simulation designs and data generation."""

import numpy as np
import pytest

from factormix.apps.modeling.models import ModelParams, ModelSpec
from factormix.apps.simulation.logic.design import (
    design_loadings,
    design_mixture,
    design_weights,
    generate_design,
    sample_responses,
)
from factormix.common.exceptions import InvalidArgumentError


@pytest.mark.parametrize(
    ('k', 'expected'),
    [(1, [1.0]), (2, [0.5, 0.5]), (3, [0.3, 0.3, 0.4]), (4, [0.25] * 4)],
)
def test_design_weights(k: int, expected: list[float]) -> None:
    """Fixed weights up to three components, uniform beyond."""
    assert design_weights(k) == pytest.approx(expected)


@pytest.mark.parametrize(('q', 'k'), [(1, 1), (1, 2), (2, 3), (3, 4)])
def test_design_mixture_is_standardized(q: int, k: int) -> None:
    """Designs live on the standardized scale."""
    mixture = design_mixture(q, k, np.random.default_rng(0))

    assert (mixture.k, mixture.q) == (k, q)
    assert mixture.is_standardized()


def test_design_loadings_follow_blocks() -> None:
    """Items load strongly on their own block only."""
    loadings = design_loadings(10, 2, np.random.default_rng(1))
    matrix = loadings.matrix

    assert matrix[0, 1] == 0.0
    assert ((matrix[:5, 0] >= 2) & (matrix[:5, 0] <= 4)).all()
    assert ((matrix[5:, 1] >= 2) & (matrix[5:, 1] <= 4)).all()
    assert ((matrix[1:5, 1] >= 0) & (matrix[1:5, 1] <= 0.5)).all()
    assert ((matrix[5:, 0] >= 0) & (matrix[5:, 0] <= 0.5)).all()
    assert (np.abs(loadings.intercepts) <= 3).all()


def test_generate_design_is_deterministic() -> None:
    """The seed fixes every parameter."""
    first = generate_design(2, 3, 42, p=8, n=100, n_reps=4)
    again = generate_design(2, 3, 42, p=8, n=100, n_reps=4)

    assert first.spec == ModelSpec(p=8, q=2, k=3)
    assert (first.n, first.n_reps, first.seed) == (100, 4, 42)
    np.testing.assert_array_equal(
        first.true_params.loadings.matrix, again.true_params.loadings.matrix,
    )
    np.testing.assert_array_equal(
        first.true_params.mixture.means, again.true_params.mixture.means,
    )


@pytest.mark.parametrize(
    ('q', 'p', 'n', 'n_reps'),
    [(3, 2, 100, 1), (1, 5, 0, 1), (1, 5, 10, -1)],
)
def test_generate_design_rejects(q: int, p: int, n: int, n_reps: int) -> None:
    """Impossible designs are refused."""
    with pytest.raises(InvalidArgumentError):
        generate_design(q, 1, 0, p=p, n=n, n_reps=n_reps)


class TestSampleResponses:
    """Draws from the hierarchical model."""

    def test_structure(self, small_params: ModelParams) -> None:
        """Labels, latents and pattern indices describe every observation."""
        sample = sample_responses(small_params, 500, seed=1)

        assert sample.data.n == 500
        assert sample.labels.shape == (500,)
        assert sample.latents.shape == (500, 1)
        assert set(np.unique(sample.labels)) <= {0, 1}
        np.testing.assert_array_equal(
            np.bincount(sample.pattern_index), sample.data.counts,
        )

    def test_deterministic(self, small_params: ModelParams) -> None:
        """Equal seeds give equal data."""
        first = sample_responses(small_params, 50, seed=9)
        again = sample_responses(small_params, 50, seed=9)

        np.testing.assert_array_equal(first.data.patterns, again.data.patterns)
        np.testing.assert_array_equal(first.labels, again.labels)

    def test_frequencies(self, two_factor_params: ModelParams) -> None:
        """Labels and factors follow the mixture."""
        sample = sample_responses(two_factor_params, 20_000, seed=2)

        shares = np.bincount(sample.labels, minlength=3) / 20_000
        assert shares == pytest.approx(
            two_factor_params.mixture.weights, abs=0.02,
        )
        assert sample.latents.mean(axis=0) == pytest.approx([0, 0], abs=0.05)
        assert np.cov(sample.latents.T) == pytest.approx(np.eye(2), abs=0.05)

    def test_positive_size(self, small_params: ModelParams) -> None:
        """At least one observation."""
        with pytest.raises(InvalidArgumentError):
            sample_responses(small_params, 0, seed=1)
