import io
import json
import math

import pandas as pd
from django.test import SimpleTestCase

from delay_logistic.services import export_service, history_service, integrator_service
from delay_logistic.services.equation_service import Params
from delay_logistic.services.integrator_service import SolverConfig


class ExportServiceTests(SimpleTestCase):

    def test_trajectory_frame_and_sidecar_for_blowup(self):
        p = Params(r=1.0, alpha=1.0)
        tr = integrator_service.integrate(p, history_service.make_blowup_seed(p, 4.0), SolverConfig(t_end=1.0))
        frame = export_service.trajectory_frame(tr, 0.01)
        self.assertEqual(list(frame.columns), ['t', 'x'])
        self.assertLess(frame['t'].max(), tr.t_final)

        sidecar = export_service.sidecar(tr)
        self.assertEqual(set(sidecar), {'status', 't_blowup', 'bracket_width', 'lower_bound_prop3', 't_end',
                                        'abort_reason', 'n_steps'})
        self.assertEqual(sidecar['status'], 'blown_up')
        self.assertIsNone(sidecar['lower_bound_prop3'])

    def test_lower_bound_reported_for_certified_below_history(self):
        p = Params(r=1.0, alpha=math.exp(-1.0))
        phi = history_service.make_below_exponential(1.0, 1.0, 0.5)
        tr = integrator_service.integrate(p, phi, SolverConfig(t_end=50.0))
        sidecar = export_service.sidecar(tr)
        self.assertEqual(sidecar['status'], 'blown_up')
        self.assertAlmostEqual(sidecar['lower_bound_prop3'], math.log(1.0 + math.e))
        self.assertGreaterEqual(sidecar['t_blowup'], sidecar['lower_bound_prop3'] - 1e-9)

    def test_csv_leaves_missing_values_empty(self):
        frame = pd.DataFrame({'alpha': [0.0, 0.5], 'exp_solution_r': [float('nan'), 0.69]})
        lines = export_service.csv_text(frame).splitlines()
        self.assertEqual(lines[0], 'alpha,exp_solution_r')
        self.assertEqual(lines[1], '0.0,')

    def test_json_rejects_nothing_after_sanitizing(self):
        stream = io.StringIO()
        export_service.write_json({'value': math.inf, 'items': [1.0, math.nan]}, stream)
        self.assertEqual(json.loads(stream.getvalue()), {'value': None, 'items': [1.0, None]})

    def test_sidecar_path(self):
        self.assertEqual(str(export_service.sidecar_path('out/run.csv')), 'out/run.json')
