from pathlib import Path
from decouple import config, Csv
import os

# ======================================= SECURITY & BASIC ========================================
BASE_DIR = Path(__file__).resolve().parent.parent
# No request handling happens in this project; the key only satisfies Django's startup checks.
SECRET_KEY = config('SECRET_KEY', default='pqcpslab-offline-key')
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config(
    'ALLOWED_HOSTS',
    default='localhost,127.0.0.1',
    cast=Csv()
)


# Application definition

INSTALLED_APPS = [
    'kem.apps.KemConfig',
    'channel.apps.ChannelConfig',
    'netsim.apps.NetsimConfig',
    'scenarios.apps.ScenariosConfig',
    'threatmodel.apps.ThreatmodelConfig',
    'labcli.apps.LabcliConfig',

    'rest_framework',
]


# ===================== REST FRAMEWORK (validation + JSON rendering only) =====================
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}


TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [],
        },
    },
]

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# ===================== LAB DEFAULTS =====================
PQCPSLAB_SEED = config('PQCPSLAB_SEED', default=42, cast=int)
PQCPSLAB_CYCLE_PERIOD_NS = config('PQCPSLAB_CYCLE_PERIOD_NS', default=0.29, cast=float)
PQCPSLAB_THRESHOLD_US = config('PQCPSLAB_THRESHOLD_US', default=100_000, cast=int)
PQCPSLAB_RUNS = config('PQCPSLAB_RUNS', default=5, cast=int)
PQCPSLAB_DATA_MESSAGE_BYTES = config('PQCPSLAB_DATA_MESSAGE_BYTES', default=32, cast=int)
PQCPSLAB_NODE_SPEED_MPS = config('PQCPSLAB_NODE_SPEED_MPS', default=40.0, cast=float)
PQCPSLAB_STATIC_SEPARATION_M = config('PQCPSLAB_STATIC_SEPARATION_M', default=1350.0, cast=float)

# Link presets: 100 Gbps Ethernet, 54 Mbps ad hoc LTE
PQCPSLAB_WIRED_BANDWIDTH_BPS = config('PQCPSLAB_WIRED_BANDWIDTH_BPS', default=100e9, cast=float)
PQCPSLAB_WIRED_OVERHEAD_US = config('PQCPSLAB_WIRED_OVERHEAD_US', default=0.44, cast=float)
PQCPSLAB_WIRELESS_BANDWIDTH_BPS = config('PQCPSLAB_WIRELESS_BANDWIDTH_BPS', default=54e6, cast=float)
PQCPSLAB_WIRELESS_OVERHEAD_US = config('PQCPSLAB_WIRELESS_OVERHEAD_US', default=1000.0, cast=float)
# per moving endpoint on the wireless link
PQCPSLAB_WIRELESS_MOBILITY_OVERHEAD_US = config('PQCPSLAB_WIRELESS_MOBILITY_OVERHEAD_US', default=3.11, cast=float)
PQCPSLAB_PROPAGATION_SPEED_MPS = config('PQCPSLAB_PROPAGATION_SPEED_MPS', default=3e8, cast=float)

PQCPSLAB_SCENARIO_WORKERS = config('PQCPSLAB_SCENARIO_WORKERS', default=1, cast=int)

# Test tuning
PQCPSLAB_ROUNDTRIP_TRIALS = config('PQCPSLAB_ROUNDTRIP_TRIALS', default=25, cast=int)
PQCPSLAB_TIMING_ITERATIONS = config('PQCPSLAB_TIMING_ITERATIONS', default=60, cast=int)
PQCPSLAB_TIMING_BATCHES = config('PQCPSLAB_TIMING_BATCHES', default=5, cast=int)
PQCPSLAB_KAT_DIR = Path(config('PQCPSLAB_KAT_DIR', default=str(BASE_DIR / 'kem' / 'kat')))


# ===================== LOGGING =====================
LOG_LEVEL = config('LOG_LEVEL', default='INFO')
LOG_FILE = Path(config('LOG_FILE', default=str(BASE_DIR / 'logs' / 'pqcpslab.log')))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': LOG_LEVEL,
            'class': 'logging.FileHandler',
            'filename': LOG_FILE,
            'formatter': 'plain',
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        '': {
            'handlers': ['file', 'console'],
            'level': LOG_LEVEL,
            'propagate': True,
        },
    },
}

# Create logs folder
os.makedirs(LOG_FILE.parent, exist_ok=True)
