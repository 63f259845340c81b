"""
Development settings for lorval.
"""

from .base import *

from decouple import config

LOG_LEVEL = config('LORVAL_LOG_LEVEL', default='DEBUG')

LOGGING['handlers']['console']['formatter'] = 'verbose'
for _logger in LOGGING['loggers'].values():
    _logger['level'] = LOG_LEVEL
