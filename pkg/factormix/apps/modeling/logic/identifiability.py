"""Parameter accounting and the admissible number of factors."""

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from factormix.apps.modeling.models import ModelSpec


def ledermann_max_factors(p: int) -> int:
    """Largest factor count admissible for ``p`` items.

    Returns ``floor((2p + 1 - sqrt(8p + 1)) / 2)`` evaluated in exact
    integer arithmetic.

    >>> ledermann_max_factors(4), ledermann_max_factors(10)
    (1, 6)

    Args:
        p: Number of items.

    Returns:
        Maximum number of factors, possibly zero.
    """
    discriminant = 8 * p + 1
    q = 0
    while True:
        margin = 2 * p + 1 - 2 * (q + 1)
        if margin < 0 or margin * margin < discriminant:
            return q
        q += 1


def count_free_parameters(spec: 'ModelSpec') -> int:
    """Number of free parameters of a model with dimensions ``spec``.

    Counts intercepts and unmasked loadings, then the mixture weights,
    means and covariances, less the mean and covariance restrictions
    that standardize the factors. A single component is fully pinned.

    >>> from factormix.apps.modeling.models import ModelSpec
    >>> count_free_parameters(ModelSpec(p=21, q=2, k=3))
    74

    Args:
        spec: Model dimensions.

    Returns:
        Free parameter count.
    """
    p, q, k = spec.p, spec.q, spec.k
    symmetric = q * (q + 1) // 2
    measurement = p * (q + 1) - q * (q - 1) // 2
    mixture = (k - 1) + k * q + k * symmetric
    return measurement + mixture - q - symmetric
