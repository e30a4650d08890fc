"""JSON serialization of fit artifacts.

Floats are written with ``repr`` precision, so reading a file back
reproduces every number exactly.
"""

import dataclasses
import json
from pathlib import Path
from typing import Any

import numpy as np

from factormix.apps.artifacts.exceptions import (
    ArtifactParseError,
    ArtifactVersionError,
)
from factormix.apps.artifacts.models import FORMAT_VERSION, FitArtifact
from factormix.apps.estimation.models import FitConfig
from factormix.apps.modeling.models import (
    Loadings,
    MixtureParams,
    ModelParams,
    ModelSpec,
    PatternTable,
)
from factormix.apps.selection.models import (
    BivariateResidualReport,
    InformationCriteria,
    PatternFitTests,
)
from factormix.common.exceptions import FactorMixError


def _config_fields(config: FitConfig) -> dict[str, Any]:
    """Stored configuration fields, the thread count left out."""
    fields = dataclasses.asdict(config)
    del fields['workers']
    return fields


def _encode(artifact: FitArtifact) -> dict[str, Any]:
    params = artifact.params
    spec = params.spec
    residuals = artifact.residuals
    return {
        'format_version': artifact.format_version,
        'created_at': artifact.created_at,
        'finished_at': artifact.finished_at,
        'seed': artifact.seed,
        'spec': {'p': spec.p, 'q': spec.q, 'k': spec.k},
        'config': _config_fields(artifact.config),
        'data': {
            'item_names': list(artifact.data.item_names),
            'patterns': artifact.data.patterns.tolist(),
            'counts': artifact.data.counts.tolist(),
            'constant_items': list(artifact.data.constant_items()),
        },
        'params': {
            'intercepts': params.loadings.intercepts.tolist(),
            'loadings': params.loadings.matrix.tolist(),
            'weights': params.mixture.weights.tolist(),
            'means': params.mixture.means.tolist(),
            'covariances': params.mixture.covariances.tolist(),
        },
        'loglik_trace': artifact.loglik_trace.tolist(),
        'converged': artifact.converged,
        'n_iter': artifact.n_iter,
        'n_free_parameters': spec.n_free_parameters,
        'criteria': artifact.criteria._asdict(),
        'tests': artifact.tests._asdict(),
        'posteriors': artifact.posteriors.tolist(),
        'map_labels': artifact.map_labels.tolist(),
        'factor_scores': artifact.factor_scores.tolist(),
        'residuals': {
            'threshold': residuals.threshold,
            'max_residual': residuals.max_residual,
            'pairs': residuals.pairs.tolist(),
            'observed': residuals.observed.tolist(),
            'expected': residuals.expected.tolist(),
            'residuals': residuals.residuals.tolist(),
            'unstable': residuals.unstable.tolist(),
        },
    }


def write_fit(artifact: FitArtifact, path: Path | str) -> None:
    """Write ``artifact`` as indented JSON with sorted keys."""
    text = json.dumps(_encode(artifact), indent=2, sort_keys=True)
    Path(path).write_text(f'{text}\n', encoding='utf-8')


def _decode(document: dict[str, Any]) -> FitArtifact:
    spec = ModelSpec(**document['spec'])
    stored = document['params']
    data_block = document['data']
    data = PatternTable(
        patterns=np.array(data_block['patterns'], dtype=np.int64),
        counts=np.array(data_block['counts'], dtype=np.int64),
        item_names=tuple(data_block['item_names']),
    )
    params = ModelParams(
        loadings=Loadings.identified(
            np.array(stored['intercepts']),
            np.array(stored['loadings']).reshape(spec.p, spec.q),
        ),
        mixture=MixtureParams(
            weights=np.array(stored['weights']),
            means=np.array(stored['means']).reshape(spec.k, spec.q),
            covariances=np.array(stored['covariances']).reshape(
                spec.k, spec.q, spec.q,
            ),
        ),
        spec=spec,
    )
    block = document['residuals']
    residuals = BivariateResidualReport(
        pairs=np.array(block['pairs'], dtype=np.int64).reshape(-1, 2),
        observed=np.array(block['observed']).reshape(-1, 4),
        expected=np.array(block['expected']).reshape(-1, 4),
        residuals=np.array(block['residuals']).reshape(-1, 4),
        unstable=np.array(block['unstable'], dtype=np.bool_).reshape(-1, 4),
        threshold=float(block['threshold']),
        item_names=data.item_names,
    )
    return FitArtifact(
        params=params,
        config=FitConfig(**document['config']),
        data=data,
        loglik_trace=np.array(document['loglik_trace'], dtype=np.float64),
        converged=bool(document['converged']),
        n_iter=int(document['n_iter']),
        criteria=InformationCriteria(**document['criteria']),
        tests=PatternFitTests(**document['tests']),
        posteriors=np.array(document['posteriors']).reshape(-1, spec.k),
        factor_scores=np.array(document['factor_scores']).reshape(
            -1, spec.q,
        ),
        residuals=residuals,
        created_at=document['created_at'],
        finished_at=document['finished_at'],
        format_version=document['format_version'],
    )


def read_fit(path: Path | str) -> FitArtifact:
    """Read an artifact written by :func:`write_fit`.

    Raises:
        ArtifactVersionError: If the file has another format version.
        ArtifactParseError: If the file is missing, truncated or incomplete.
    """
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as error:
        raise ArtifactParseError(str(path), str(error)) from error
    if not isinstance(document, dict):
        raise ArtifactParseError(str(path), 'top level is not an object')
    version = document.get('format_version')
    if version != FORMAT_VERSION:
        raise ArtifactVersionError(version, FORMAT_VERSION)
    try:
        return _decode(document)
    except (KeyError, TypeError, ValueError, FactorMixError) as error:
        raise ArtifactParseError(str(path), repr(error)) from error
