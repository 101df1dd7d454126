"""
Django settings for the delay logistic lab.

Numerical defaults are collected in ``DDE_LAB`` and can be overridden
through ``DDE_LAB_*`` environment variables (see env.txt).
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-dde-lab-local-only-key')

DEBUG = os.environ.get('DJANGO_DEBUG', 'True').lower() in ('true', '1', 't')
ALLOWED_HOSTS = os.environ.get('DJANGO_ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'delay_logistic',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
    'delay_logistic.middleware.APIRequestLoggingMiddleware',
]

# REST Framework settings
REST_FRAMEWORK = {
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_AUTHENTICATION_CLASSES': [
        'rest_framework.authentication.SessionAuthentication',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
}

ROOT_URLCONF = 'dde_lab_project.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'dde_lab_project.wsgi.application'

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

STATIC_URL = 'static/'

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


def _env_float(name: str, default: float) -> float:
    return float(os.environ.get(name, default))


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


# Numerical defaults for the solver, certification and verification suites
DDE_LAB = {
    'RTOL': _env_float('DDE_LAB_RTOL', 1e-9),
    'ATOL': _env_float('DDE_LAB_ATOL', 1e-12),
    'X_SWITCH': _env_float('DDE_LAB_X_SWITCH', 1e3),
    'X_FLOOR': _env_float('DDE_LAB_X_FLOOR', 1e-3),
    'BLOWUP_TIME_TOL': _env_float('DDE_LAB_BLOWUP_TIME_TOL', 1e-9),
    'MAX_STEPS': _env_int('DDE_LAB_MAX_STEPS', 500000),
    'METHOD': os.environ.get('DDE_LAB_METHOD', 'DOP853'),
    'MESH_CAP': _env_int('DDE_LAB_MESH_CAP', 20000),
    'DEFAULT_SEED': _env_int('DDE_LAB_DEFAULT_SEED', 42),
    'CERTIFY_GRID_N': _env_int('DDE_LAB_CERTIFY_GRID_N', 1000),
}

LOG_LEVEL = os.environ.get('DDE_LAB_LOG_LEVEL', 'INFO')

# Logging configuration; console output goes to stderr so CSV/JSON on stdout stays clean
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        'file': {
            'level': LOG_LEVEL,
            'class': 'logging.FileHandler',
            'filename': os.environ.get('DDE_LAB_LOG_FILE', 'dde_lab.log'),
            'formatter': 'verbose',
            'delay': True,
        },
    },
    'loggers': {
        'api_requests': {
            'handlers': ['console', 'file'],
            'level': 'INFO',
            'propagate': False,
        },
        'delay_logistic': {
            'handlers': ['console', 'file'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'django.request': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}
