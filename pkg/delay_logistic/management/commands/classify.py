from ...serializers import ClassifySerializer
from ...services import analysis_service, export_service
from ..base import LabCommand


class Command(LabCommand):
    help = 'Classify an (alpha, r) pair and print the result as JSON'
    serializer_class = ClassifySerializer
    flags = ('r', 'alpha', 'alpha_exp')
    boolean_flags = ('alpha_exp',)

    def add_lab_arguments(self, parser):
        parser.add_argument('--r', help='Growth rate r > 0')
        parser.add_argument('--alpha', help='Instantaneous coefficient alpha')
        parser.add_argument('--alpha-exp', action='store_true', default=None, help='Set alpha = e^-r exactly')

    def handle(self, *args, **options):
        data = self.validate(self.merged_options(options))
        region = analysis_service.classify(data['params'])
        self.stdout.write(export_service.json_text(region.as_dict()), ending='')
