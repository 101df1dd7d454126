import logging

from django.views.decorators.csrf import csrf_exempt
from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from ..exceptions import LabError
from ..models import SimulationRun
from ..serializers import SimulateSerializer, error_text
from ..services import export_service, integrator_service
from ..services.integrator_service import SolverConfig
from ..services.scenario_service import jsonable

logger = logging.getLogger(__name__)

__all__ = ['simulate']

MAX_API_SAMPLES = 100000


@csrf_exempt
@api_view(['POST'])
def simulate(request):
    """Integrate one history and return the sampled trajectory with its run summary"""
    serializer = SimulateSerializer(data=request.data)
    if not serializer.is_valid():
        return Response({
            'status': 'error',
            'message': error_text(serializer.errors)
        }, status=status.HTTP_400_BAD_REQUEST)

    data = serializer.validated_data
    if data['t_end'] / data['dt_out'] > MAX_API_SAMPLES:
        return Response({
            'status': 'error',
            'message': f"t_end/dt_out exceeds {MAX_API_SAMPLES} samples"
        }, status=status.HTTP_400_BAD_REQUEST)

    try:
        cfg = SolverConfig.from_settings(t_end=data['t_end'], rtol=data.get('rtol'), atol=data.get('atol'))
        trajectory = integrator_service.integrate(data['params'], data['history_fn'], cfg)
        frame = export_service.trajectory_frame(trajectory, data['dt_out'])
    except LabError as e:
        logger.error(f"Simulation failed: {e}", exc_info=True)
        return Response({
            'status': 'error',
            'message': str(e)
        }, status=status.HTTP_400_BAD_REQUEST)

    run = SimulationRun.from_trajectory(trajectory, data['history'], cfg)
    logger.info(f"Simulation {run.pk}: {trajectory.status.value} at t={trajectory.t_final}")

    return Response({
        'status': 'success',
        'data': {
            'run_id': run.pk,
            'sidecar': export_service.sidecar(trajectory),
            't': jsonable(frame['t'].tolist()),
            'x': jsonable(frame['x'].tolist()),
        }
    })
