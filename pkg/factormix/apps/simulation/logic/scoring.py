"""Agreement between true and estimated component memberships."""

import itertools
import math
from typing import Final

import numpy as np

from factormix.common.exceptions import InvalidArgumentError, ResourceLimitError
from factormix.common.typing import IntArray

_MAX_COMPONENTS: Final = 8


def misclassification_error(
    true_labels: IntArray,
    estimated_labels: IntArray,
    k: int,
) -> float:
    """Smallest mismatch rate over all relabelings of the estimates.

    >>> truth, estimate = np.array([0, 0, 1, 1]), np.array([1, 1, 0, 0])
    >>> misclassification_error(truth, estimate, 2)
    0.0

    Args:
        true_labels: 0-based true components.
        estimated_labels: 0-based estimated components.
        k: Number of components.

    Returns:
        Fraction of observations misclassified under the best relabeling.

    Raises:
        InvalidArgumentError: On mismatched lengths or labels out of range.
        ResourceLimitError: If ``k`` exceeds 8.
    """
    truth = np.asarray(true_labels, dtype=np.int64)
    estimate = np.asarray(estimated_labels, dtype=np.int64)
    if truth.shape != estimate.shape or truth.ndim != 1:
        raise InvalidArgumentError('label vectors must have equal length')
    if k > _MAX_COMPONENTS:
        raise ResourceLimitError(
            'label permutation search',
            math.factorial(k),
            math.factorial(_MAX_COMPONENTS),
        )
    labels = np.concatenate([truth, estimate])
    if k < 1 or (labels < 0).any() or (labels >= k).any():
        raise InvalidArgumentError(f'labels must lie in 0..{k - 1}')
    if truth.size == 0:
        return 0.0
    return min(
        float(np.mean(np.array(permutation)[estimate] != truth))
        for permutation in itertools.permutations(range(k))
    )
