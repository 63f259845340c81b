"""
Production settings for lorval: batch runs on shared machines.
"""

from .base import *

from decouple import config

LOG_LEVEL = config('LORVAL_LOG_LEVEL', default='WARNING')
THREADS = config('LORVAL_THREADS', default=4, cast=int)

for _logger in LOGGING['loggers'].values():
    _logger['level'] = LOG_LEVEL
