"""Django app configuration for the modeling app."""

from django.apps import AppConfig


class ModelingConfig(AppConfig):
    """Configuration for the measurement and latent-mixture model types."""

    name = 'factormix.apps.modeling'
    verbose_name = 'Modeling'
