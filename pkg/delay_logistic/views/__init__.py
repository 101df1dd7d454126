from .analysis_views import *
from .simulation_views import *
from .verification_views import *

__all__ = [
    # Analysis views
    'classify_params',
    'stability_boundary',

    # Simulation views
    'simulate',

    # Verification views
    'list_suite_runs',
]
