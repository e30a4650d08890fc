"""Value objects of the factor mixture model.

All types are immutable after construction: array fields are copied
and marked read-only, so instances can be shared between threads.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Final, final

import numpy as np

from factormix.apps.modeling.logic.identifiability import (
    count_free_parameters,
    ledermann_max_factors,
)
from factormix.common.exceptions import InvalidArgumentError
from factormix.common.typing import BoolArray, FloatArray, IntArray

_SIMPLEX_TOLERANCE: Final = 1e-12
_SYMMETRY_TOLERANCE: Final = 1e-12


def _readonly(values: object, dtype: type) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def identifiability_mask(p: int, q: int) -> BoolArray:
    """Return the structural zero mask of a ``p x q`` loading matrix.

    Entry ``(j, r)`` is fixed to zero when ``r > j`` (0-based), which
    pins the ``q(q-1)/2`` upper-triangular loadings.

    Args:
        p: Item count.
        q: Factor count.

    Returns:
        Boolean ``p x q`` matrix, true where the loading is fixed.
    """
    rows = np.arange(p)[:, np.newaxis]
    cols = np.arange(q)[np.newaxis, :]
    return cols > rows


@final
@dataclass(frozen=True)
class ModelSpec:
    """Dimensions of a factor mixture model.

    Attributes:
        p: Number of binary items.
        q: Number of latent factors.
        k: Number of mixture components.
    """

    p: int
    q: int
    k: int

    def __post_init__(self) -> None:
        """Validate that every dimension is a positive integer."""
        for name in ('p', 'q', 'k'):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise InvalidArgumentError(
                    f'{name} must be a positive integer, got {value!r}',
                )

    @property
    def n_free_parameters(self) -> int:
        """Number of free parameters, see :func:`count_free_parameters`."""
        return count_free_parameters(self)

    @property
    def satisfies_ledermann(self) -> bool:
        """Whether ``q`` respects the Ledermann bound for ``p`` items."""
        return self.q <= ledermann_max_factors(self.p)

    def require_identifiable(self) -> None:
        """Raise when more factors are requested than ``p`` items allow.

        Raises:
            InvalidArgumentError: If the Ledermann bound is violated.
        """
        if not self.satisfies_ledermann:
            raise InvalidArgumentError(
                f'q={self.q} factors exceed the Ledermann bound '
                f'for p={self.p} items',
            )


@final
@dataclass(frozen=True, eq=False)
class PatternTable:
    """Binary responses collapsed to distinct patterns with counts.

    Attributes:
        patterns: ``(H, p)`` matrix of distinct 0/1 response patterns.
        counts: Multiplicity of every pattern.
        item_names: Column labels, ``item1 .. itemp`` when unnamed.
    """

    patterns: IntArray
    counts: IntArray
    item_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        """Freeze arrays and validate the table invariants."""
        patterns = np.array(self.patterns, dtype=np.int64, ndmin=2)
        counts = np.array(self.counts, dtype=np.int64).reshape(-1)
        if patterns.shape[0] != counts.shape[0]:
            raise InvalidArgumentError(
                'patterns and counts must have the same length',
            )
        if patterns.shape[0] == 0 or patterns.shape[1] == 0:
            raise InvalidArgumentError('a pattern table cannot be empty')
        if not np.isin(patterns, (0, 1)).all():
            raise InvalidArgumentError('pattern cells must be 0 or 1')
        if (counts < 1).any():
            raise InvalidArgumentError('pattern counts must be positive')
        if np.unique(patterns, axis=0).shape[0] != patterns.shape[0]:
            raise InvalidArgumentError('patterns must be pairwise distinct')
        names = tuple(self.item_names) or tuple(
            f'item{index + 1}' for index in range(patterns.shape[1])
        )
        if len(names) != patterns.shape[1]:
            raise InvalidArgumentError(
                'item_names must name every column exactly once',
            )
        object.__setattr__(self, 'patterns', _readonly(patterns, np.int64))
        object.__setattr__(self, 'counts', _readonly(counts, np.int64))
        object.__setattr__(self, 'item_names', names)

    @classmethod
    def from_rows(
        cls,
        rows: Iterable[Sequence[int]] | np.ndarray,
        item_names: Sequence[str] = (),
    ) -> 'PatternTable':
        """Collapse raw observation rows into distinct patterns.

        Patterns are stored in lexicographic order, so equal data always
        produce equal tables.

        Args:
            rows: One 0/1 vector per observation.
            item_names: Optional column labels.

        Returns:
            Collapsed pattern table.

        Raises:
            InvalidArgumentError: If rows are empty or not binary.
        """
        matrix = np.array(rows, dtype=np.int64, ndmin=2)
        if matrix.size == 0:
            raise InvalidArgumentError('cannot collapse an empty data set')
        patterns, counts = np.unique(matrix, axis=0, return_counts=True)
        return cls(
            patterns=patterns,
            counts=counts,
            item_names=tuple(item_names),
        )

    @property
    def p(self) -> int:
        """Number of items."""
        return int(self.patterns.shape[1])

    @property
    def n(self) -> int:
        """Total number of observations."""
        return int(self.counts.sum())

    @property
    def n_patterns(self) -> int:
        """Number of distinct observed patterns."""
        return int(self.patterns.shape[0])

    def expand_rows(self) -> IntArray:
        """Return the ``(n, p)`` observation matrix the table stands for."""
        return np.repeat(self.patterns, self.counts, axis=0)

    def constant_items(self) -> tuple[int, ...]:
        """Indices of items answered identically by every observation."""
        ones = self.counts @ self.patterns
        return tuple(
            int(index)
            for index in np.flatnonzero((ones == 0) | (ones == self.n))
        )


@final
@dataclass(frozen=True, eq=False)
class Loadings:
    """Intercepts and constrained factor loadings, logit scale.

    Attributes:
        intercepts: Length-``p`` vector of item intercepts.
        matrix: ``p x q`` factor loading matrix.
        zero_mask: ``p x q`` boolean matrix of structural zeros.
    """

    intercepts: FloatArray
    matrix: FloatArray
    zero_mask: BoolArray

    def __post_init__(self) -> None:
        """Freeze arrays and validate the identifiability constraints."""
        intercepts = np.array(self.intercepts, dtype=np.float64).reshape(-1)
        matrix = np.array(self.matrix, dtype=np.float64, ndmin=2)
        zero_mask = np.array(self.zero_mask, dtype=np.bool_, ndmin=2)
        p, q = matrix.shape
        if intercepts.shape != (p,):
            raise InvalidArgumentError(
                f'expected {p} intercepts, got {intercepts.shape[0]}',
            )
        if not np.array_equal(zero_mask, identifiability_mask(p, q)):
            raise InvalidArgumentError(
                'zero_mask must fix exactly the upper-triangular loadings',
            )
        if (matrix[zero_mask] != 0).any():
            raise InvalidArgumentError('masked loadings must be exactly 0')
        object.__setattr__(
            self, 'intercepts', _readonly(intercepts, np.float64),
        )
        object.__setattr__(self, 'matrix', _readonly(matrix, np.float64))
        object.__setattr__(self, 'zero_mask', _readonly(zero_mask, np.bool_))

    @classmethod
    def identified(
        cls,
        intercepts: Sequence[float] | FloatArray,
        matrix: Sequence[Sequence[float]] | FloatArray,
    ) -> 'Loadings':
        """Build loadings, zeroing the entries the mask fixes.

        Args:
            intercepts: Length-``p`` intercepts.
            matrix: ``p x q`` loadings; masked entries are overwritten.

        Returns:
            Loadings satisfying the identifiability mask.
        """
        values = np.array(matrix, dtype=np.float64, ndmin=2)
        mask = identifiability_mask(*values.shape)
        values[mask] = 0.0
        return cls(intercepts=intercepts, matrix=values, zero_mask=mask)

    @property
    def p(self) -> int:
        """Number of items."""
        return int(self.matrix.shape[0])

    @property
    def q(self) -> int:
        """Number of factors."""
        return int(self.matrix.shape[1])

    def free_mask(self) -> BoolArray:
        """Boolean ``p x q`` matrix of estimable loadings."""
        return ~self.zero_mask


@final
@dataclass(frozen=True, eq=False)
class MixtureParams:
    """Finite Gaussian mixture over the latent factors.

    Attributes:
        weights: Length-``k`` mixing proportions.
        means: ``k x q`` component means.
        covariances: ``k x q x q`` component covariance matrices.
    """

    weights: FloatArray
    means: FloatArray
    covariances: FloatArray

    def __post_init__(self) -> None:
        """Freeze arrays and validate simplex and covariance invariants."""
        weights = np.array(self.weights, dtype=np.float64).reshape(-1)
        means = np.array(self.means, dtype=np.float64, ndmin=2)
        covariances = np.array(self.covariances, dtype=np.float64, ndmin=3)
        k, q = means.shape
        if weights.shape != (k,) or covariances.shape != (k, q, q):
            raise InvalidArgumentError(
                'weights, means and covariances disagree on k or q',
            )
        if (weights < 0).any() or abs(weights.sum() - 1) > _SIMPLEX_TOLERANCE:
            raise InvalidArgumentError('weights must lie on the simplex')
        asymmetry = np.abs(covariances - covariances.transpose(0, 2, 1))
        if asymmetry.max() > _SYMMETRY_TOLERANCE:
            raise InvalidArgumentError('covariances must be symmetric')
        if (np.linalg.eigvalsh(covariances) <= 0).any():
            raise InvalidArgumentError(
                'covariances must be positive definite',
            )
        object.__setattr__(self, 'weights', _readonly(weights, np.float64))
        object.__setattr__(self, 'means', _readonly(means, np.float64))
        object.__setattr__(
            self, 'covariances', _readonly(covariances, np.float64),
        )

    @classmethod
    def standard_normal(cls, q: int) -> 'MixtureParams':
        """Single-component ``N(0, I_q)`` mixture."""
        return cls(
            weights=np.ones(1),
            means=np.zeros((1, q)),
            covariances=np.eye(q)[np.newaxis],
        )

    @property
    def k(self) -> int:
        """Number of components."""
        return int(self.weights.shape[0])

    @property
    def q(self) -> int:
        """Number of factors."""
        return int(self.means.shape[1])

    def overall_moments(self) -> tuple[FloatArray, FloatArray]:
        """Mean and covariance of the latent factors implied by the mixture."""
        mean = self.weights @ self.means
        second = np.einsum(
            'i,irs->rs',
            self.weights,
            self.covariances
            + np.einsum('ir,is->irs', self.means, self.means),
        )
        return mean, second - np.outer(mean, mean)

    def standardization_error(self) -> tuple[float, float]:
        """Largest deviations from zero mean and identity covariance."""
        mean, covariance = self.overall_moments()
        return (
            float(np.abs(mean).max()),
            float(np.abs(covariance - np.eye(self.q)).max()),
        )

    def is_standardized(self, tolerance: float = 1e-8) -> bool:
        """Whether the factors have zero mean and identity covariance."""
        return max(self.standardization_error()) <= tolerance


@final
@dataclass(frozen=True, eq=False)
class ModelParams:
    """Complete parameter set of a fitted or candidate model."""

    loadings: Loadings
    mixture: MixtureParams
    spec: ModelSpec

    def __post_init__(self) -> None:
        """Check that every block agrees with ``spec``."""
        spec = self.spec
        if (self.loadings.p, self.loadings.q) != (spec.p, spec.q):
            raise InvalidArgumentError(
                f'loadings are {self.loadings.p}x{self.loadings.q}, '
                f'spec needs {spec.p}x{spec.q}',
            )
        if (self.mixture.k, self.mixture.q) != (spec.k, spec.q):
            raise InvalidArgumentError(
                f'mixture has k={self.mixture.k}, q={self.mixture.q}, '
                f'spec needs k={spec.k}, q={spec.q}',
            )
