import logging

from django.core.management.base import CommandError

from ...exceptions import LabError
from ...serializers import BoundarySerializer
from ...services import analysis_service, export_service
from ..base import EXIT_BAD_INPUT, LabCommand

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Write the stability boundary and exponential-solution curve as CSV'
    serializer_class = BoundarySerializer
    flags = ('alpha_min', 'alpha_max', 'n', 'out')

    def add_lab_arguments(self, parser):
        parser.add_argument('--alpha-min', help='Lower end of the alpha range, > -1')
        parser.add_argument('--alpha-max', help='Upper end of the alpha range, < 1')
        parser.add_argument('--n', help='Number of samples')
        parser.add_argument('--out', help='CSV path (default: standard output)')

    def handle(self, *args, **options):
        merged = self.merged_options(options)
        data = self.validate(merged)
        try:
            frame = analysis_service.stability_chart(data['alpha_min'], data['alpha_max'], data['n'])
        except LabError as exc:
            logger.error(f"boundary failed: {exc}")
            raise CommandError(str(exc), returncode=EXIT_BAD_INPUT)
        export_service.write_csv(frame, merged.get('out') or self.stdout)
