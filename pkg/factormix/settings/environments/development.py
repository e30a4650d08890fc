"""
This file contains all the settings of local runs.

Iteration traces are logged at DEBUG, set ``FACTORMIX_LOG_LEVEL`` to see them.
"""

DEBUG = True
