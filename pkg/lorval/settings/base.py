"""
Base settings for lorval.
This file contains numerical defaults shared across all environments.
"""

from pathlib import Path

from decouple import config
from dotenv import load_dotenv

from core.utils.logger import default_logging_config

BASE_DIR = Path(__file__).resolve().parent.parent.parent

load_dotenv(BASE_DIR / '.env')

# Worker parallelism for sweeps; 1 means sequential
THREADS = config('LORVAL_THREADS', default=1, cast=int)

# Seed for Monte-Carlo oracles and random patch generators
SEED = config('LORVAL_SEED', default=20240229, cast=int)

LOG_LEVEL = config('LORVAL_LOG_LEVEL', default='INFO')

# Numerical tolerances
DEGENERACY_TOL = config('LORVAL_DEGENERACY_TOL', default=1e-8, cast=float)
POLE_WINDOW = config('LORVAL_POLE_WINDOW', default=1e-9, cast=float)
JET_ORDER = config('LORVAL_JET_ORDER', default=40, cast=int)
QUAD_LIMIT = config('LORVAL_QUAD_LIMIT', default=400, cast=int)
QUAD_EPSABS = config('LORVAL_QUAD_EPSABS', default=1e-13, cast=float)
QUAD_EPSREL = config('LORVAL_QUAD_EPSREL', default=1e-11, cast=float)

# Default stretch grid for divergence sweeps
SWEEP_EPS_MIN = config('LORVAL_SWEEP_EPS_MIN', default=1e-5, cast=float)
SWEEP_EPS_MAX = config('LORVAL_SWEEP_EPS_MAX', default=1e-1, cast=float)
SWEEP_POINTS = config('LORVAL_SWEEP_POINTS', default=16, cast=int)

LOGGING = default_logging_config(LOG_LEVEL)
