"""
Settings of the factormix commands, assembled with django-split-settings.

Components are shared by every run, ``DJANGO_ENV`` picks the environment
layer on top of them and ``environments/local.py`` may override both::

    DJANGO_ENV=production python manage.py fit --data data.csv --q 1 --k 2
"""

from os import environ

import django_stubs_ext
from split_settings.tools import include, optional

# Generic stubs of Django classes need the runtime patch:
django_stubs_ext.monkeypatch()

environ.setdefault('DJANGO_ENV', 'development')
_ENV = environ['DJANGO_ENV']

include(
    'components/common.py',
    'components/logging.py',
    'components/estimation.py',
    f'environments/{_ENV}.py',
    optional('environments/local.py'),
)
