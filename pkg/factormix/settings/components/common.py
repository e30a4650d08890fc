"""
Django settings for the factormix command line.

Only the management command machinery of Django is used: there is
no database, no templates and no HTTP layer.
"""

from factormix.settings.components import config

SECRET_KEY = config(
    'DJANGO_SECRET_KEY',
    default='factormix-has-no-sessions-or-signing',
)

# Application definition:

INSTALLED_APPS: tuple[str, ...] = (
    'factormix.apps.modeling',
    'factormix.apps.quadrature',
    'factormix.apps.estimation',
    'factormix.apps.selection',
    'factormix.apps.simulation',
    'factormix.apps.inference',
    'factormix.apps.artifacts',
)

DATABASES: dict[str, dict[str, object]] = {}

USE_TZ = True
TIME_ZONE = 'UTC'
