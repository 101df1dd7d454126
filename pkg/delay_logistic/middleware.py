import json
import logging
import time

from django.utils.deprecation import MiddlewareMixin

logger = logging.getLogger('api_requests')


class APIRequestLoggingMiddleware(MiddlewareMixin):
    """Logs method, path, status and duration of every API request"""

    def process_request(self, request):
        request.start_time = time.perf_counter()

        if request.path.startswith('/api/'):
            logger.info(f"API Request: {request.method} {request.path}")
            query_params = dict(request.GET.items())
            if query_params:
                logger.info(f"Query Params: {query_params}")

            if request.method in ('POST', 'PUT', 'PATCH'):
                try:
                    body = json.loads(request.body.decode('utf-8'))
                except (json.JSONDecodeError, UnicodeDecodeError):
                    body = '<binary data or invalid JSON>'
                if body:
                    logger.info(f"Request Body: {body}")

        return None

    def process_response(self, request, response):
        if hasattr(request, 'start_time') and request.path.startswith('/api/'):
            duration = time.perf_counter() - request.start_time
            size = len(response.content) if hasattr(response, 'content') else 0
            logger.info(f"API Response: {request.method} {request.path} - Status: {response.status_code} "
                        f"- Duration: {duration:.3f}s - {size} bytes")
        return response
