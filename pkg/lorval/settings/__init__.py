"""
lorval settings.

``LORVAL_ENVIRONMENT`` picks the module: ``dev`` (the default) or
``production``. Any other value falls back to the bare numerical defaults.
"""

from decouple import config

ENVIRONMENT = config('LORVAL_ENVIRONMENT', default='dev')

if ENVIRONMENT in ('production', 'prod'):
    from .prod import *  # noqa: F401,F403
elif ENVIRONMENT == 'dev':
    from .dev import *  # noqa: F401,F403
else:
    from .base import *  # noqa: F401,F403
