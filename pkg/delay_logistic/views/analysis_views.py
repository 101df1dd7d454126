import logging

from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from ..exceptions import LabError
from ..serializers import BoundarySerializer, ClassifySerializer, error_text
from ..services import analysis_service
from ..services.scenario_service import jsonable

logger = logging.getLogger(__name__)

__all__ = ['classify_params', 'stability_boundary']


@api_view(['GET'])
def classify_params(request):
    """Region classification of (alpha, r)"""
    serializer = ClassifySerializer(data=request.GET)
    if not serializer.is_valid():
        return Response({
            'status': 'error',
            'message': error_text(serializer.errors)
        }, status=status.HTTP_400_BAD_REQUEST)

    region = analysis_service.classify(serializer.validated_data['params'])
    return Response({
        'status': 'success',
        'data': jsonable(region.as_dict())
    })


@api_view(['GET'])
def stability_boundary(request):
    """Stability boundary and exponential-solution curve over an alpha range"""
    serializer = BoundarySerializer(data=request.GET)
    if not serializer.is_valid():
        return Response({
            'status': 'error',
            'message': error_text(serializer.errors)
        }, status=status.HTTP_400_BAD_REQUEST)

    data = serializer.validated_data
    try:
        frame = analysis_service.stability_chart(data['alpha_min'], data['alpha_max'], data['n'])
    except LabError as e:
        logger.error(f"Stability chart failed: {e}")
        return Response({
            'status': 'error',
            'message': str(e)
        }, status=status.HTTP_400_BAD_REQUEST)

    return Response({
        'status': 'success',
        'data': jsonable(frame.to_dict(orient='records'))
    })
