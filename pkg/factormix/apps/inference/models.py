"""Bootstrap results."""

from dataclasses import dataclass
from typing import final

from factormix.common.typing import FloatArray, IntArray


@final
@dataclass(frozen=True, eq=False)
class BootstrapReport:
    """Bootstrap standard errors of a fit.

    Mixture standard errors are computed after aligning every
    replicate's components to the point estimate.

    Attributes:
        B: Replicates drawn.
        se_intercepts: Length-``p`` standard errors.
        se_loadings: ``p x q`` standard errors; masked entries are 0.
        n_failed: Replicates whose refit failed.
        alignment_permutations: ``(B - n_failed, k)`` permutation applied
            to each successful replicate; row ``b`` maps reference
            component ``i`` to replicate component ``perm[i]``.
        se_weights: Standard errors of the mixture weights.
        se_means: ``k x q`` standard errors of the component means.
        se_covariances: ``k x q x q`` standard errors of the covariances.
    """

    B: int  # noqa: N815
    se_intercepts: FloatArray
    se_loadings: FloatArray
    n_failed: int
    alignment_permutations: IntArray
    se_weights: FloatArray
    se_means: FloatArray
    se_covariances: FloatArray

    @property
    def n_successful(self) -> int:
        """Replicates that entered the standard errors."""
        return self.B - self.n_failed
