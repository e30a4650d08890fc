"""Configuration, intermediate and final results of the GEM estimator."""

from dataclasses import dataclass, field
from typing import final

from factormix.apps.modeling.models import ModelParams
from factormix.apps.selection.models import InformationCriteria
from factormix.common.exceptions import InvalidArgumentError
from factormix.common.typing import FloatArray


@final
@dataclass(frozen=True)
class FitConfig:
    """Tuning knobs of a fit.

    Attributes:
        quad_points: Gauss-Hermite order per latent dimension.
        epsilon: Absolute log-likelihood change that stops the iterations.
        max_iter: Cap on GEM iterations.
        newton_max: Newton steps per item and iteration.
        n_starts: Number of random starts.
        ridge: Floor on the eigenvalues of component covariances.
        seed: Root seed of all random draws.
        workers: Threads used for independent starts.
    """

    quad_points: int = 8
    epsilon: float = 1e-5
    max_iter: int = 500
    newton_max: int = 5
    n_starts: int = 1
    ridge: float = 1e-6
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        """Reject non-positive settings."""
        for name in (
            'quad_points', 'max_iter', 'newton_max', 'n_starts', 'workers',
        ):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise InvalidArgumentError(
                    f'{name} must be a positive integer, got {value!r}',
                )
        if not self.epsilon > 0 or not self.ridge > 0:
            raise InvalidArgumentError('epsilon and ridge must be positive')
        if self.seed < 0:
            raise InvalidArgumentError('seed must be non-negative')


@final
@dataclass(frozen=True, eq=False)
class EStepResult:
    """Posterior quantities of every distinct pattern.

    Attributes:
        responsibilities: ``(H, k)`` posterior component probabilities.
        component_lik: ``(H, k)`` likelihood of each pattern per component.
        cond_mean: ``(H, k, q)`` conditional factor means.
        cond_second: ``(H, k, q, q)`` conditional second moments.
        loglik: Count-weighted observed-data log-likelihood.
        node_posteriors: ``(H, k, G)`` posterior weights of the grid nodes.
        nodes: ``(k, G, q)`` grid nodes mapped into every component.
    """

    responsibilities: FloatArray
    component_lik: FloatArray
    cond_mean: FloatArray
    cond_second: FloatArray
    loglik: float
    node_posteriors: FloatArray
    nodes: FloatArray


@final
@dataclass
class FitDiagnostics:
    """Counters of safeguards that fired during a fit."""

    gradient_fallbacks: int = 0
    mixture_backtracks: int = 0
    stalls: int = 0
    failed_starts: list[tuple[int, str]] = field(default_factory=list)
    best_start: int = 0

    def merge(self, other: 'FitDiagnostics') -> None:
        """Add the counters of ``other`` to this instance."""
        self.gradient_fallbacks += other.gradient_fallbacks
        self.mixture_backtracks += other.mixture_backtracks
        self.stalls += other.stalls


@final
@dataclass(frozen=True, eq=False)
class FitResult:
    """Best solution found by :func:`fit`.

    Attributes:
        params: Standardized parameter estimates.
        loglik_trace: Log-likelihood before the first and after every
            iteration.
        converged: Whether the tolerance was reached before ``max_iter``.
        n_iter: Iterations performed.
        posteriors: ``(H, k)`` responsibilities at the estimates.
        criteria: AIC and BIC of the estimates.
        config: Configuration the fit ran with.
        diagnostics: Safeguard counters over all starts.
    """

    params: ModelParams
    loglik_trace: FloatArray
    converged: bool
    n_iter: int
    posteriors: FloatArray
    criteria: InformationCriteria
    config: FitConfig
    diagnostics: FitDiagnostics = field(default_factory=FitDiagnostics)

    @property
    def loglik(self) -> float:
        """Final log-likelihood."""
        return float(self.loglik_trace[-1])

    @property
    def n_free_parameters(self) -> int:
        """Free parameters of the fitted model."""
        return self.params.spec.n_free_parameters

