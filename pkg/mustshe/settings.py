"""
Django settings for the mustshe project.

Generated by 'django-admin startproject' using Django 5.2.6.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/5.2/howto/deployment/checklist/

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-mustshe-evaluation-toolkit-local-only')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',

    # Third party apps
    'rest_framework',

    # Local apps
    'corpus',
    'metrics',
    'evaluation',
    'builder',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'mustshe.urls'

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

WSGI_APPLICATION = 'mustshe.wsgi.application'


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('MUSTSHE_DB_PATH', default=str(BASE_DIR / 'db.sqlite3')),
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Static files (CSS, JavaScript, Images)
# https://docs.djangoproject.com/en/5.2/howto/static-files/

STATIC_URL = 'static/'
STATIC_ROOT = BASE_DIR / 'mustshe/static'

# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework Configuration
REST_FRAMEWORK = {
    'DEFAULT_PERMISSION_CLASSES': (
        'rest_framework.permissions.AllowAny',
    ),
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'UNICODE_JSON': True,
}

# Corpus file conventions
# Each mapping names the source header for every canonical field. CATEGORY and
# FORM may point at the same column when it holds combined codes such as "1F".
MUSTSHE_COLUMN_MAPPINGS = {
    'canonical': {
        'columns': {
            'id': 'ID',
            'talk': 'TALK',
            'source': 'SRC',
            'ref_correct': 'REF-C',
            'ref_wrong': 'REF-W',
            'speaker': 'SPEAKER',
            'form': 'FORM',
            'category': 'CATEGORY',
            'terms': 'TERMS',
        },
        'term_separator': ':',
    },
    # Header of the officially released MuST-SHE TSV files.
    'mustshe-v1': {
        'columns': {
            'id': 'ID',
            'talk': 'TALK',
            'source': 'SRC',
            'ref_correct': 'REF',
            'ref_wrong': 'WRONG-REF',
            'speaker': 'GENDER',
            'form': 'CATEGORY',
            'category': 'CATEGORY',
            'terms': 'GENDERTERMS',
        },
        'term_separator': ' ',
    },
}

MUSTSHE_SPEAKER_ALIASES = {
    'F': ['f', 'she', 'female', 'woman'],
    'M': ['m', 'he', 'male', 'man'],
}

# Corpus builder
MUSTSHE_RESOURCES_DIR = Path(config('MUSTSHE_RESOURCES_DIR', default=str(BASE_DIR / 'builder' / 'resources')))
MUSTSHE_DEFAULT_SEED = config('MUSTSHE_DEFAULT_SEED', default=13, cast=int)
MUSTSHE_DEFAULT_QUOTA = config('MUSTSHE_DEFAULT_QUOTA', default=250, cast=int)

# Logging Configuration
# Diagnostics go to stderr; command results are written to stdout or --output.
MUSTSHE_LOG_LEVEL = config('MUSTSHE_LOG_LEVEL', default='WARNING')
MUSTSHE_LOG_FILE = config('MUSTSHE_LOG_FILE', default='')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': MUSTSHE_LOG_LEVEL,
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}

if MUSTSHE_LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': 'INFO',
        'class': 'logging.FileHandler',
        'filename': MUSTSHE_LOG_FILE,
        'formatter': 'verbose',
    }
    LOGGING['root']['handlers'].append('file')
    LOGGING['loggers']['django']['handlers'].append('file')
