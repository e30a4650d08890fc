from pathlib import Path

import pytest

from factormix.apps.artifacts.infrastructure.fit_store import write_fit
from factormix.apps.artifacts.logic.assembly import assemble_artifact
from factormix.apps.artifacts.models import FitArtifact
from factormix.apps.estimation.logic.fitting import fit
from factormix.apps.estimation.models import FitConfig, FitResult
from factormix.apps.modeling.models import ModelSpec, PatternTable


@pytest.fixture
def fitted(small_data: PatternTable, quick_config: FitConfig) -> FitResult:
    """Two-component fit of ``small_data``."""
    return fit(small_data, ModelSpec(p=4, q=1, k=2), quick_config)


@pytest.fixture
def artifact(fitted: FitResult, small_data: PatternTable) -> FitArtifact:
    """Artifact of ``fitted`` without timestamps."""
    return assemble_artifact(fitted, small_data)


@pytest.fixture
def stored_fit(tmp_path: Path, artifact: FitArtifact) -> Path:
    """``artifact`` written to ``fit.json``."""
    path = tmp_path.joinpath('fit.json')
    write_fit(artifact, path)
    return path
