"""
Django settings for the qsrlab project.

Only management commands run here: there is no URL configuration and no
WSGI/ASGI application.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "qsrlab-local-key")

DEBUG = os.environ.get("DJANGO_DEBUG", "False").lower() == "true"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'qsr',
]


# Database
# Holds the certificate ledger only.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get("QSRLAB_DB", BASE_DIR / 'qsrlab.sqlite3'),
    }
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# Reports go to stdout; log records go to stderr so report bytes stay
# reproducible.

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "{levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "qsr": {
            "handlers": ["console"],
            "level": os.environ.get("QSRLAB_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}


# =============================================================================
# CUSTOM PROJECT SETTINGS - qsrlab specific
# =============================================================================

QSRLAB = {
    # Exact-enumeration guards for the matrix scheme
    "MAX_MESSAGE_BITS": 8,
    "MAX_SECURITY_BITS": 8,
    "MAX_REGISTER_BITS": 24,   # t(m+n)
    "MAX_KEY_BITS": 24,        # mn
    "BRUTEFORCE_MAX_BITS": 24,  # nt for the rank-distribution oracle
    "MAX_PAULI_QUBITS": 3,

    # Reproducibility and output
    "DEFAULT_SEED": int(os.environ.get("QSRLAB_SEED", "0")),
    "SCHEMA_VERSION": "qsrlab/1",
    "DEFAULT_GRID": "m=1-3;n=1-4;t=0-3",
    "SWEEP_WORKERS": int(os.environ.get("QSRLAB_WORKERS", "4")),
}
