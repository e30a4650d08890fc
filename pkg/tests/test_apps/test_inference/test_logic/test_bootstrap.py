"""Tests for bootstrap standard errors."""

import itertools
from types import SimpleNamespace

import numpy as np
import pytest

from factormix.apps.estimation.exceptions import FitError
from factormix.apps.estimation.logic.fitting import fit
from factormix.apps.estimation.models import FitConfig
from factormix.apps.inference.exceptions import BootstrapFailureError
from factormix.apps.inference.logic import bootstrap
from factormix.apps.inference.logic.bootstrap import (
    align_components,
    bootstrap_standard_errors,
)
from factormix.apps.modeling.models import (
    MixtureParams,
    ModelParams,
    ModelSpec,
    PatternTable,
)
from factormix.apps.simulation.logic.design import sample_responses
from factormix.common.exceptions import InvalidArgumentError


def test_align_swapped_components(
    two_component_mixture: MixtureParams,
) -> None:
    """Mirrored components are matched back."""
    swapped = MixtureParams(
        weights=two_component_mixture.weights[::-1],
        means=two_component_mixture.means[::-1],
        covariances=two_component_mixture.covariances[::-1],
    )

    np.testing.assert_array_equal(
        align_components(two_component_mixture, swapped), [1, 0],
    )
    np.testing.assert_array_equal(
        align_components(two_component_mixture, two_component_mixture),
        [0, 1],
    )


def test_align_three_components() -> None:
    """The assignment minimizes the total distance."""
    reference = MixtureParams(
        weights=np.full(3, 1 / 3),
        means=[[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]],
        covariances=np.tile(np.eye(2), (3, 1, 1)),
    )
    candidate = MixtureParams(
        weights=np.full(3, 1 / 3),
        means=[[0.1, 2.9], [-0.2, 0.1], [2.8, 0.3]],
        covariances=np.tile(np.eye(2), (3, 1, 1)),
    )

    np.testing.assert_array_equal(
        align_components(reference, candidate), [1, 2, 0],
    )


def test_align_needs_equal_dimensions(
    two_component_mixture: MixtureParams,
) -> None:
    """Mixtures of different size cannot be aligned."""
    with pytest.raises(InvalidArgumentError):
        align_components(
            two_component_mixture, MixtureParams.standard_normal(1),
        )


def test_at_least_two_replicates(
    small_params: ModelParams,
    small_data: PatternTable,
    quick_config: FitConfig,
) -> None:
    """One replicate has no spread."""
    with pytest.raises(InvalidArgumentError, match='at least 2'):
        bootstrap_standard_errors(
            small_data, small_params.spec, quick_config, 1, small_params,
        )


def test_point_estimate_must_match(
    small_params: ModelParams,
    small_data: PatternTable,
    quick_config: FitConfig,
) -> None:
    """The warm start has the bootstrapped dimensions."""
    with pytest.raises(InvalidArgumentError, match='point estimate'):
        bootstrap_standard_errors(
            small_data, ModelSpec(p=4, q=1, k=3), quick_config, 5,
            small_params,
        )


def test_identical_refits_have_no_spread(
    small_params: ModelParams,
    small_data: PatternTable,
    quick_config: FitConfig,
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    """Replicates that all return the point estimate give zero errors."""
    monkeypatch.setattr(
        bootstrap, 'fit', lambda *args, **kwargs: SimpleNamespace(
            params=small_params,
        ),
    )

    report = bootstrap_standard_errors(
        small_data, small_params.spec, quick_config, 4, small_params,
    )

    assert report.B == 4
    assert report.n_successful == 4
    np.testing.assert_array_equal(report.se_intercepts, np.zeros(4))
    np.testing.assert_array_equal(report.se_loadings, np.zeros((4, 1)))
    np.testing.assert_array_equal(report.se_means, np.zeros((2, 1)))
    np.testing.assert_array_equal(
        report.alignment_permutations, [[0, 1]] * 4,
    )


def test_some_refits_fail(
    small_params: ModelParams,
    small_data: PatternTable,
    quick_config: FitConfig,
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    """Failed refits are counted and left out."""
    calls = itertools.count()

    def sometimes(*args: object, **kwargs: object) -> SimpleNamespace:
        if next(calls) == 0:
            raise FitError([(0, 'collapsed')])
        return SimpleNamespace(params=small_params)

    monkeypatch.setattr(bootstrap, 'fit', sometimes)

    report = bootstrap_standard_errors(
        small_data, small_params.spec, quick_config, 3, small_params,
    )

    assert report.n_failed == 1
    assert report.n_successful == 2
    assert report.alignment_permutations.shape == (2, 2)


def test_most_refits_fail(
    small_params: ModelParams,
    small_data: PatternTable,
    quick_config: FitConfig,
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    """More than half failing aborts the bootstrap."""

    def failing(*args: object, **kwargs: object) -> None:
        raise FitError([(0, 'collapsed')])

    monkeypatch.setattr(bootstrap, 'fit', failing)

    with pytest.raises(BootstrapFailureError, match='3 of 3') as error:
        bootstrap_standard_errors(
            small_data, small_params.spec, quick_config, 3, small_params,
        )

    assert error.value.exit_code == 3


def test_small_bootstrap(
    small_data: PatternTable,
    quick_config: FitConfig,
) -> None:
    """Real refits give positive errors for free parameters."""
    spec = ModelSpec(p=4, q=1, k=2)
    point = fit(small_data, spec, quick_config).params

    report = bootstrap_standard_errors(small_data, spec, quick_config, 3, point)

    assert report.n_failed == 0
    assert (report.se_intercepts > 0).all()
    assert report.se_loadings.shape == (4, 1)
    assert report.se_covariances.shape == (2, 1, 1)
    for permutation in report.alignment_permutations:
        assert sorted(permutation) == [0, 1]


def test_bootstrap_does_not_depend_on_workers(
    small_params: ModelParams,
    small_data: PatternTable,
    quick_config: FitConfig,
) -> None:
    """Replicates are seeded by index."""
    serial = bootstrap_standard_errors(
        small_data, small_params.spec, quick_config, 2, small_params,
    )
    threaded = bootstrap_standard_errors(
        small_data, small_params.spec, quick_config, 2, small_params, 2,
    )

    np.testing.assert_array_equal(serial.se_loadings, threaded.se_loadings)
    np.testing.assert_array_equal(serial.se_weights, threaded.se_weights)


@pytest.mark.slow
@pytest.mark.timeout(900)
def test_errors_track_sampling_spread(
    small_params: ModelParams,
    small_data: PatternTable,
) -> None:
    """Bootstrap errors are close to the spread over fresh samples."""
    cfg = FitConfig(quad_points=8, epsilon=1e-5, max_iter=300)
    spec = small_params.spec
    point = fit(small_data, spec, cfg, start=small_params).params

    report = bootstrap_standard_errors(small_data, spec, cfg, 50, point)
    estimates = [
        fit(
            sample_responses(small_params, small_data.n, seed).data,
            spec,
            cfg,
            start=small_params,
        ).params.loadings
        for seed in range(100, 150)
    ]
    sampling_intercepts = np.std(
        [loadings.intercepts for loadings in estimates], axis=0, ddof=1,
    )
    sampling_loadings = np.std(
        [np.abs(loadings.matrix) for loadings in estimates], axis=0, ddof=1,
    )

    assert report.n_failed == 0
    for bootstrap_se, sampling_sd in (
        (report.se_intercepts, sampling_intercepts),
        (report.se_loadings, sampling_loadings),
    ):
        ratio = bootstrap_se / sampling_sd
        assert ((ratio > 0.5) & (ratio < 2)).all(), ratio
