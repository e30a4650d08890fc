"""Django app configuration for the selection app."""

from django.apps import AppConfig


class SelectionConfig(AppConfig):
    """Configuration for model comparison and goodness of fit."""

    name = 'factormix.apps.selection'
    verbose_name = 'Model selection'
