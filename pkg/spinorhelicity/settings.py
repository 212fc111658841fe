"""
Spinor-helicity toolkit settings
Numerical tolerances, sampling defaults and logging, all overridable from the environment
"""

import os
from pathlib import Path
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

# Load environment variables from .env file
load_dotenv(BASE_DIR / '.env')

SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-spinorhelicity-cli-only')
DEBUG = os.environ.get('DEBUG', 'False') == 'True'
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'kinematics',
]

# No persistent storage
DATABASES = {}

USE_TZ = True
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Parallelism and reproducibility
SHV_THREADS = int(os.environ.get('SHV_THREADS', '4'))
SHV_SEED = int(os.environ.get('SHV_SEED', '0'))

# Newton solver
SHV_NEWTON_TOL = float(os.environ.get('SHV_NEWTON_TOL', '1e-11'))
SHV_DEDUP_RADIUS = float(os.environ.get('SHV_DEDUP_RADIUS', '1e-6'))
SHV_NEWTON_STARTS_FACTOR = int(os.environ.get('SHV_NEWTON_STARTS_FACTOR', '200'))
SHV_NEWTON_MAX_HALVINGS = int(os.environ.get('SHV_NEWTON_MAX_HALVINGS', '30'))
SHV_NEWTON_MAX_ITERATIONS = int(os.environ.get('SHV_NEWTON_MAX_ITERATIONS', '80'))
SHV_NEWTON_ESCAPE_RADIUS = float(os.environ.get('SHV_NEWTON_ESCAPE_RADIUS', '1e6'))

# Sector classification
SHV_RANK_TOL = float(os.environ.get('SHV_RANK_TOL', '1e-8'))

# Sampling and verification
SHV_VERIFY_SAMPLES = int(os.environ.get('SHV_VERIFY_SAMPLES', '20'))
SHV_RESAMPLE_CAP = int(os.environ.get('SHV_RESAMPLE_CAP', '100'))
SHV_REPORT_SEEDS = int(os.environ.get('SHV_REPORT_SEEDS', '20'))

# Logging goes to stderr so stdout stays machine-readable
SHV_LOG_LEVEL = os.environ.get('SHV_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '{levelname} {name}: {message}', 'style': '{'},
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'services': {'handlers': ['stderr'], 'level': SHV_LOG_LEVEL, 'propagate': False},
        'kinematics': {'handlers': ['stderr'], 'level': SHV_LOG_LEVEL, 'propagate': False},
    },
}
