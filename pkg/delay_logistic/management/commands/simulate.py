import logging

from django.core.management.base import CommandError

from ...exceptions import LabError
from ...models import SimulationRun
from ...serializers import SimulateSerializer
from ...services import export_service, integrator_service
from ...services.history_service import ExpProfileHistory
from ...services.integrator_service import RunStatus, SolverConfig
from ..base import EXIT_ABORTED, EXIT_BAD_INPUT, LabCommand

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Integrate the delay logistic equation and write a trajectory CSV with a JSON sidecar'
    serializer_class = SimulateSerializer
    flags = ('r', 'alpha', 'alpha_exp', 'history', 't_end', 'rtol', 'atol', 'dt_out', 'c', 'out', 'sidecar')
    boolean_flags = ('record', 'alpha_exp')
    recordable = True

    def add_lab_arguments(self, parser):
        parser.add_argument('--r', help='Growth rate r > 0')
        parser.add_argument('--alpha', help='Instantaneous coefficient alpha')
        parser.add_argument('--alpha-exp', action='store_true', default=None, help='Set alpha = e^-r exactly')
        parser.add_argument('--history', help='History spec, e.g. const:v=1, stepramp:q=4, exp:c=1, table:h.csv')
        parser.add_argument('--t-end', help='Final time')
        parser.add_argument('--rtol', help='Relative tolerance')
        parser.add_argument('--atol', help='Absolute tolerance')
        parser.add_argument('--dt-out', help='Output sample spacing (default 0.01)')
        parser.add_argument('--c', help='Scale c of the reference solution c e^{rt} for the z column')
        parser.add_argument('--out', help='Trajectory CSV path (default: standard output)')
        parser.add_argument('--sidecar', help='Sidecar JSON path (default: --out with a .json suffix)')

    def handle(self, *args, **options):
        merged = self.merged_options(options)
        data = self.validate(merged)
        p, phi = data['params'], data['history_fn']

        try:
            cfg = SolverConfig.from_settings(t_end=data['t_end'], rtol=data.get('rtol'), atol=data.get('atol'))
            trajectory = integrator_service.integrate(p, phi, cfg)
            c = data.get('c') or (phi.c if isinstance(phi, ExpProfileHistory) else None)
            z_trajectory, ratio = None, None
            if c is not None:
                ratio = integrator_service.observe_ratio(trajectory, c, data['dt_out'])
                if integrator_service.on_exponential_locus(p):
                    z_trajectory = integrator_service.integrate_z(p, c, phi, cfg)
            frame = export_service.trajectory_frame(trajectory, data['dt_out'], z_trajectory)
        except LabError as exc:
            logger.error(f"simulate failed: {exc}", exc_info=True)
            raise CommandError(str(exc), returncode=EXIT_BAD_INPUT)

        sidecar = export_service.sidecar(trajectory, ratio)
        out = merged.get('out')
        if out:
            export_service.write_csv(frame, out)
        else:
            export_service.write_csv(frame, self.stdout)

        sidecar_target = merged.get('sidecar') or (export_service.sidecar_path(out) if out else None)
        if sidecar_target:
            export_service.write_json(sidecar, sidecar_target)
        else:
            logger.info(f"Run summary: {sidecar}")

        if merged.get('record'):
            run = SimulationRun.from_trajectory(trajectory, data['history'], cfg)
            logger.info(f"Recorded simulation run {run.pk}")

        if trajectory.status is RunStatus.ABORTED:
            raise CommandError(f"simulation aborted: {trajectory.abort_reason}", returncode=EXIT_ABORTED)
