"""Information criteria."""

import math

from factormix.apps.selection.models import InformationCriteria
from factormix.common.exceptions import InvalidArgumentError


def information_criteria(
    loglik: float,
    n_par: int,
    n: int,
) -> InformationCriteria:
    """Akaike and Bayesian information criteria.

    >>> information_criteria(-2658.257, 62, 400)
    InformationCriteria(aic=5440.514, bic=5687.98)

    Args:
        loglik: Maximized log-likelihood.
        n_par: Number of free parameters.
        n: Sample size.

    Returns:
        ``-2 loglik + 2 n_par`` and ``-2 loglik + n_par log n``.

    Raises:
        InvalidArgumentError: If ``n`` is not positive.
    """
    if n < 1:
        raise InvalidArgumentError(f'sample size must be positive, got {n}')
    deviance = -2 * loglik
    return InformationCriteria(
        aic=deviance + 2 * n_par,
        bic=deviance + n_par * math.log(n),
    )
