"""Gauss-Hermite rules, tensor grids and Gaussian expectations."""

import itertools
import math
from collections.abc import Callable
from typing import Final

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.linalg import LinAlgError, cholesky

from factormix.apps.quadrature.models import HermiteRule, TensorGrid
from factormix.common.exceptions import (
    InvalidArgumentError,
    NumericalDegeneracyError,
    ResourceLimitError,
)
from factormix.common.typing import FloatArray

_MAX_ORDER: Final = 100
_MAX_GRID_POINTS: Final = 10**7


def hermite_rule(order: int) -> HermiteRule:
    """Return the ``order``-point physicists' Gauss-Hermite rule.

    Nodes and weights are symmetrized so that the rule is exactly
    symmetric about zero.

    Args:
        order: Number of points ``T``, between 1 and 100.

    Returns:
        The quadrature rule.

    Raises:
        InvalidArgumentError: If ``order`` is out of range.
    """
    if isinstance(order, bool) or not 1 <= order <= _MAX_ORDER:
        raise InvalidArgumentError(
            f'quadrature order must lie in [1, {_MAX_ORDER}], got {order}',
        )
    nodes, weights = hermgauss(order)
    nodes = (nodes - nodes[::-1]) / 2
    weights = (weights + weights[::-1]) / 2
    return HermiteRule(nodes=nodes, weights=weights)


def tensor_grid(q: int, order: int) -> TensorGrid:
    """Cartesian product of the ``order``-point rule over ``q`` axes.

    Points are enumerated with the last axis varying fastest.

    Raises:
        InvalidArgumentError: If ``q`` is not positive.
        ResourceLimitError: If the grid would exceed ``10**7`` points.
    """
    if q < 1:
        raise InvalidArgumentError(f'dimension must be positive, got {q}')
    rule = hermite_rule(order)
    size = order**q
    if size > _MAX_GRID_POINTS:
        raise ResourceLimitError('quadrature grid', size, _MAX_GRID_POINTS)
    indices = np.array(list(itertools.product(range(order), repeat=q)))
    points = rule.nodes[indices]
    weights = np.prod(rule.weights[indices], axis=1)
    return TensorGrid(
        points=points,
        weights=weights,
        normalizer=math.pi ** (-q / 2),
    )


def lower_cholesky(sigma: FloatArray) -> FloatArray:
    """Lower-triangular Cholesky factor of a covariance matrix.

    Raises:
        NumericalDegeneracyError: If ``sigma`` is not positive definite.
    """
    try:
        return cholesky(np.asarray(sigma, dtype=np.float64), lower=True)
    except (LinAlgError, ValueError) as error:
        raise NumericalDegeneracyError(
            'covariance matrix is not positive definite',
        ) from error


def transform_grid(
    grid: TensorGrid,
    mu: FloatArray,
    sigma: FloatArray,
) -> TensorGrid:
    """Map grid points to integrate against ``N(mu, sigma)``.

    Every point ``x`` becomes ``sqrt(2) * L @ x + mu`` with ``L`` the lower
    Cholesky factor of ``sigma``; the weights do not change.

    Raises:
        NumericalDegeneracyError: If ``sigma`` is not positive definite.
    """
    factor = lower_cholesky(np.atleast_2d(sigma))
    shift = np.atleast_1d(np.asarray(mu, dtype=np.float64))
    if factor.shape != (grid.q, grid.q) or shift.shape != (grid.q,):
        raise InvalidArgumentError('mu and sigma must match the grid dimension')
    return TensorGrid(
        points=math.sqrt(2) * grid.points @ factor.T + shift,
        weights=grid.weights,
        normalizer=grid.normalizer,
        transformed=True,
    )


def expect(
    grid: TensorGrid,
    integrand: Callable[[FloatArray], float | FloatArray],
) -> float | FloatArray:
    """Quadrature expectation of ``integrand`` over ``grid``.

    Values are accumulated in grid order, so the result is
    reproducible bit for bit.

    Args:
        grid: Grid, usually produced by :func:`transform_grid`.
        integrand: Function of one latent point, scalar or array valued.

    Returns:
        ``normalizer * sum_t w_t * integrand(point_t)``.

    Raises:
        NumericalDegeneracyError: If the integrand is not finite somewhere.
    """
    values = np.array([integrand(point) for point in grid.points])
    if not np.isfinite(values).all():
        raise NumericalDegeneracyError('integrand is not finite on the grid')
    total = np.tensordot(grid.weights, values, axes=1) * grid.normalizer
    if np.ndim(total) == 0:
        return float(total)
    return total
