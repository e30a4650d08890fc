"""Gauss-Hermite rules and tensor-product grids."""

from dataclasses import dataclass
from typing import final

import numpy as np

from factormix.common.typing import FloatArray


@final
@dataclass(frozen=True, eq=False)
class HermiteRule:
    """One-dimensional rule for the weight function ``exp(-x^2)``.

    Attributes:
        nodes: Roots of the physicists' Hermite polynomial of degree T.
        weights: Positive quadrature weights summing to ``sqrt(pi)``.
    """

    nodes: FloatArray
    weights: FloatArray

    @property
    def order(self) -> int:
        """Number of points ``T``."""
        return int(self.nodes.shape[0])


@final
@dataclass(frozen=True, eq=False)
class TensorGrid:
    """Tensor-product grid over ``q`` dimensions.

    ``normalizer * sum(weights * g(points))`` approximates the
    expectation of ``g`` under the Gaussian the points were mapped to.

    Attributes:
        points: ``(T**q, q)`` nodes, possibly affinely transformed.
        weights: ``T**q`` product weights.
        normalizer: ``pi ** (-q / 2)``.
        transformed: Whether the points were mapped by a Gaussian.
    """

    points: FloatArray
    weights: FloatArray
    normalizer: float
    transformed: bool = False

    def __post_init__(self) -> None:
        """Mark the arrays read-only."""
        for name in ('points', 'weights'):
            array = np.array(getattr(self, name), dtype=np.float64)
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def q(self) -> int:
        """Dimension of the grid."""
        return int(self.points.shape[1])

    @property
    def size(self) -> int:
        """Number of grid points."""
        return int(self.points.shape[0])

    def log_weights(self) -> FloatArray:
        """Logarithm of the normalized weights."""
        with np.errstate(divide='ignore'):
            return np.log(self.weights) + np.log(self.normalizer)
