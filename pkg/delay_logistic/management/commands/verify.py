import logging

from django.conf import settings
from django.core.management.base import CommandError

from ...models import SuiteRun
from ...serializers import VerifySerializer
from ...services import export_service, scenario_service
from ..base import EXIT_BAD_INPUT, LabCommand

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Run verification suites and write the JSON report; fails unless every case passes'
    serializer_class = VerifySerializer
    flags = ('suite', 'seed', 'out')
    recordable = True

    def add_lab_arguments(self, parser):
        parser.add_argument('--suite', help=f"One of {', '.join(scenario_service.suite_names())} or all")
        parser.add_argument('--seed', help='Seed for randomized histories')
        parser.add_argument('--out', help='Report path (default: standard output)')

    def handle(self, *args, **options):
        merged = self.merged_options(options)
        data = self.validate(merged)
        seed = data.get('seed', settings.DDE_LAB['DEFAULT_SEED'])

        reports = scenario_service.run(data['suite'], seed=seed)
        document = export_service.report_document(reports)
        export_service.write_json(document, merged.get('out') or self.stdout)

        if merged.get('record'):
            for report in reports:
                SuiteRun.from_report(report)
            logger.info(f"Recorded {len(reports)} suite runs")

        failed = [report.suite for report in reports if not report.overall_pass]
        if failed:
            raise CommandError(f"verification failed: {', '.join(failed)}", returncode=EXIT_BAD_INPUT)
