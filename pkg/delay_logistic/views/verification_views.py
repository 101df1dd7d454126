from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from ..models import SuiteRun

__all__ = ['list_suite_runs']


@api_view(['GET'])
def list_suite_runs(request):
    """Latest recorded verification runs, optionally filtered by suite"""
    try:
        limit = int(request.GET.get('limit', 20))
    except ValueError:
        limit = 0
    if not 1 <= limit <= 500:
        return Response({
            'status': 'error',
            'message': 'limit must be an integer between 1 and 500'
        }, status=status.HTTP_400_BAD_REQUEST)

    runs = SuiteRun.objects.all()
    suite = request.GET.get('suite')
    if suite:
        runs = runs.filter(suite=suite)

    return Response({
        'status': 'success',
        'data': [{
            'id': run.pk,
            'suite': run.suite,
            'seed': int(run.seed),
            'overall_pass': run.overall_pass,
            'case_count': run.case_count,
            'failure_count': run.failure_count,
            'created_at': run.created_at.isoformat(),
        } for run in runs[:limit]]
    })
