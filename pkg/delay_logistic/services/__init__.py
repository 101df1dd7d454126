from .equation_service import EquationService, GenParams, Params, RawParams
from .history_service import HistoryFn, HistoryService
from .analysis_service import AnalysisService, RegionClass
from .integrator_service import IntegratorService, RunStatus, SolverConfig, Trajectory
from .scenario_service import ScenarioService, SuiteReport
from .export_service import ExportService
import logging

logger = logging.getLogger(__name__)

# Create shared instances
equation_service = EquationService()
history_service = HistoryService()
analysis_service = AnalysisService(equation_service)
integrator_service = IntegratorService(equation_service, history_service, analysis_service)
scenario_service = ScenarioService(equation_service, history_service, analysis_service, integrator_service)
export_service = ExportService()

logger.debug("Delay logistic services initialized")

__all__ = [
    'equation_service',
    'history_service',
    'analysis_service',
    'integrator_service',
    'scenario_service',
    'export_service',
    'EquationService',
    'HistoryService',
    'AnalysisService',
    'IntegratorService',
    'ScenarioService',
    'ExportService',
    'Params',
    'RawParams',
    'GenParams',
    'HistoryFn',
    'RegionClass',
    'RunStatus',
    'SolverConfig',
    'SuiteReport',
    'Trajectory',
]
