from .simulation_run import SimulationRun
from .suite_run import SuiteRun

__all__ = [
    'SimulationRun',
    'SuiteRun',
]
