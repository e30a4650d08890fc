"""Monte-Carlo designs and study summaries."""

from dataclasses import dataclass, field
from typing import NamedTuple, final

from factormix.apps.modeling.models import ModelParams, ModelSpec, PatternTable
from factormix.common.typing import FloatArray, IntArray


@final
@dataclass(frozen=True, eq=False)
class SimDesign:
    """True model and sampling plan of a simulation study.

    Attributes:
        spec: Dimensions of the true model.
        true_params: Standardized parameters data are drawn from.
        n: Observations per replicate.
        n_reps: Number of replicates.
        seed: Root seed of the study.
    """

    spec: ModelSpec
    true_params: ModelParams
    n: int = 300
    n_reps: int = 20
    seed: int = 0


class SampledData(NamedTuple):
    """One data set drawn from the model.

    Attributes:
        data: Collapsed responses.
        labels: 0-based component of every observation.
        latents: ``(n, q)`` factor values of every observation.
        pattern_index: Row of ``data.patterns`` every observation maps to.
    """

    data: PatternTable
    labels: IntArray
    latents: FloatArray
    pattern_index: IntArray


@final
@dataclass(frozen=True, eq=False)
class ReplicateOutcome:
    """Everything one replicate contributes to the study summary."""

    screen: dict[int, bool]
    chosen_k: dict[str, int | None]
    intercepts: FloatArray
    loadings: FloatArray
    misclassification: float


@final
@dataclass(frozen=True, eq=False)
class StudySummary:
    """Aggregated results of a simulation study.

    Attributes:
        design: The simulated design.
        n_completed: Replicates that produced a fit at the true model.
        n_failed: Replicates excluded after a failed fit.
        q_selection_rates: Share of completed replicates in which some
            ``k`` passes the bivariate residual screen, per ``q``.
        k_selection_rates: Per criterion, the share of completed
            replicates choosing each ``k`` at the selected ``q``.
        intercept_means: Average estimated intercepts.
        intercept_rmse: Root mean square error of the intercepts.
        loading_means: Average estimated loadings.
        loading_rmse: Root mean square error of the loadings.
        misclassification: Misclassification rate of every completed
            replicate.
        misclass_mean: Average misclassification rate.
        misclass_se: Standard error of the average.
    """

    design: SimDesign
    n_completed: int
    n_failed: int
    q_selection_rates: dict[int, float]
    k_selection_rates: dict[str, dict[int, float]]
    intercept_means: FloatArray
    intercept_rmse: FloatArray
    loading_means: FloatArray
    loading_rmse: FloatArray
    misclassification: FloatArray = field(repr=False)
    misclass_mean: float
    misclass_se: float
