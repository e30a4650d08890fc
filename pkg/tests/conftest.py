"""Fixture plugins shared by the whole test suite."""

pytest_plugins = [
    # Settings must load before the fixtures that read them:
    'plugins.django_settings',
    'plugins.models',
    'plugins.files',
    'plugins.artifacts',
]
