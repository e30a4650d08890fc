"""
This file contains all the settings used for batch runs.

Logs are emitted as JSON lines to be collected by the scheduler.
"""

from factormix.settings.components.logging import LOGGING

DEBUG = False

LOGGING['loggers']['factormix']['handlers'] = [  # type: ignore[index]
    'json_console',
]
