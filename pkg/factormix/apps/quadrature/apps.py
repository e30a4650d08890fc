"""Django app configuration for the quadrature app."""

from django.apps import AppConfig


class QuadratureConfig(AppConfig):
    """Configuration for Gauss-Hermite integration rules."""

    name = 'factormix.apps.quadrature'
    verbose_name = 'Quadrature'
