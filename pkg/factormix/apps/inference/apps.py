"""Django app configuration for the inference app."""

from django.apps import AppConfig


class InferenceConfig(AppConfig):
    """Configuration for post-fit classification and bootstrap."""

    name = 'factormix.apps.inference'
    verbose_name = 'Inference'
