"""
URL configuration for the delay logistic lab.

The numerical API lives under ``api/lab/``; the admin lists recorded
simulation and verification runs.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/lab/', include('delay_logistic.urls')),
]
