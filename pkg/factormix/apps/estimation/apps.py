"""Django app configuration for the estimation app."""

from django.apps import AppConfig


class EstimationConfig(AppConfig):
    """Configuration for the generalized EM estimator."""

    name = 'factormix.apps.estimation'
    verbose_name = 'Estimation'
