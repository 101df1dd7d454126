"""
WSGI config for the delay logistic lab.

Exposes the WSGI callable as ``application`` for serving the lab API.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'dde_lab_project.settings')

application = get_wsgi_application()
