"""
ASGI config for the delay logistic lab.

Exposes the ASGI callable as ``application`` for serving the lab API.
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'dde_lab_project.settings')

application = get_asgi_application()
