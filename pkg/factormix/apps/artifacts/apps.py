"""Django app configuration for the artifacts app."""

from django.apps import AppConfig


class ArtifactsConfig(AppConfig):
    """Configuration for data ingestion, fit artifacts and reports."""

    name = 'factormix.apps.artifacts'
    verbose_name = 'Artifacts'
