from django.urls import path
from .views import classify_params, list_suite_runs, simulate, stability_boundary

urlpatterns = [
    # Analysis endpoints
    path('classify/', classify_params, name='classify'),
    path('boundary/', stability_boundary, name='boundary'),

    # Simulation endpoints
    path('simulate/', simulate, name='simulate'),

    # Verification endpoints
    path('suite-runs/', list_suite_runs, name='suite-runs'),
]
