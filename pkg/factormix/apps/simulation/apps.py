"""Django app configuration for the simulation app."""

from django.apps import AppConfig


class SimulationConfig(AppConfig):
    """Configuration for Monte-Carlo studies."""

    name = 'factormix.apps.simulation'
    verbose_name = 'Simulation'
