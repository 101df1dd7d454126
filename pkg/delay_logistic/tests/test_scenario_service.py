import json
import math

import numpy as np
from django.test import SimpleTestCase

from delay_logistic.exceptions import ContractViolation
from delay_logistic.services import export_service, scenario_service
from delay_logistic.services.scenario_service import CaseResult, SuiteReport, jsonable


class ResolveTests(SimpleTestCase):

    def test_named_suites(self):
        names = scenario_service.suite_names()
        for name in ('thm1-blowup', 'exponential', 'thm2-thm3', 'regions', 'boundary'):
            self.assertIn(name, names)
        self.assertEqual(scenario_service.resolve('all'), names)
        self.assertEqual(scenario_service.resolve('regions'), ['regions'])

    def test_unknown_suite(self):
        with self.assertRaises(ContractViolation):
            scenario_service.resolve('nosuch')


class ReportTests(SimpleTestCase):

    def test_jsonable_replaces_non_finite_values(self):
        data = jsonable({'a': math.inf, 'b': [np.float64(1.5), math.nan], 'c': np.int64(3), 'd': np.bool_(True)})
        self.assertEqual(data, {'a': None, 'b': [1.5, None], 'c': 3, 'd': True})
        json.dumps(data, allow_nan=False)

    def test_report_schema(self):
        report = SuiteReport(suite='exponential', seed=1, config={'rtol': 1e-9})
        report.cases.append(CaseResult('a', {'r': 1.0}, 0.0, 1e-12, 1e-8, True, True))
        report.cases.append(CaseResult('b', {'r': 2.0}, 0.0, math.inf, 1e-8, False, True))
        document = report.as_dict()
        self.assertEqual(set(document), {'suite', 'seed', 'config', 'cases', 'overall_pass'})
        self.assertEqual(set(document['cases'][0]), {'id', 'params', 'expected', 'observed', 'tol', 'pass',
                                                     'certified'})
        self.assertFalse(document['overall_pass'])
        self.assertIsNone(document['cases'][1]['observed'])
        self.assertEqual([case.case_id for case in report.failures], ['b'])

    def test_failing_case_is_recorded_not_raised(self):
        report = SuiteReport(suite='regions', seed=1, config={})

        def explode():
            raise RuntimeError('boom')

        case = scenario_service._run_case(report, 'explode', {}, None, None, False, explode)
        self.assertFalse(case.passed)
        self.assertEqual(case.observed, {'error': 'boom'})

    def test_combined_document(self):
        first = SuiteReport(suite='a', seed=1, config={})
        second = SuiteReport(suite='b', seed=1, config={})
        second.cases.append(CaseResult('x', {}, 0, 1, 0, False, False))
        document = export_service.report_document([first, second])
        self.assertEqual(len(document['suites']), 2)
        self.assertFalse(document['overall_pass'])
        self.assertEqual(export_service.report_document([first])['suite'], 'a')


class SuiteRunTests(SimpleTestCase):

    def assertPasses(self, report):
        self.assertTrue(report.overall_pass, [case.as_dict() for case in report.failures])

    def test_seeded_blowup_suite_passes(self):
        [report] = scenario_service.run('thm1-blowup', seed=42)
        self.assertEqual(len(report.cases), 9)
        self.assertPasses(report)

    def test_exponential_suite_passes(self):
        report = scenario_service.suite_exponential(seed=42)
        self.assertEqual(len(report.cases), 12)
        self.assertPasses(report)
        for case in report.cases[:9]:
            self.assertLess(case.observed['max_rel_err'], 1e-12)

    def test_ordering_suite_passes(self):
        report = scenario_service.suite_ordering(seed=42, rates=(1.0, 2.0), scales=(1.0,), deltas=(0.1, 2.0))
        self.assertEqual(len(report.cases), 8)
        self.assertPasses(report)
        flat = next(case for case in report.cases if case.case_id == 'above:r=1.0,c=1.0,delta=0.1')
        self.assertGreater(flat.observed['z']['tol_max'], 0.0)
        self.assertIn('worst_relative_feedback', flat.observed['feedback'])

    def test_regions_suite_passes(self):
        self.assertPasses(scenario_service.suite_regions(seed=42))

    def test_boundary_suite_passes(self):
        self.assertPasses(scenario_service.suite_boundary(seed=42))

    def test_dichotomy_suite_passes(self):
        self.assertPasses(scenario_service.suite_dichotomy(seed=42))

    def test_convergence_suite_passes(self):
        report = scenario_service.suite_convergence(seed=42)
        self.assertPasses(report)
        order = next(case for case in report.cases if case.case_id == 'fixed-step-order')
        self.assertGreaterEqual(order.observed['observed_order'], 4.0)
        oracles = [case for case in report.cases if case.case_id.startswith('z-oracle')]
        self.assertEqual(len(oracles), 2)
        for case in oracles:
            self.assertLess(case.observed['max_rel_err'], case.tol)

    def test_reports_are_deterministic(self):
        first = scenario_service.suite_seeded_blowup(seed=5).as_dict()
        second = scenario_service.suite_seeded_blowup(seed=5).as_dict()
        self.assertEqual(first, second)

    def test_seeded_suites_are_deterministic(self):
        grid = {'alphas': (-1.0,), 'rates': (1.0,), 'seed_alphas': (0.5,)}
        first = scenario_service.suite_dichotomy(seed=7, **grid).as_dict()
        second = scenario_service.suite_dichotomy(seed=7, **grid).as_dict()
        other = scenario_service.suite_dichotomy(seed=8, **grid).as_dict()
        self.assertEqual(first, second)
        self.assertNotEqual(first['cases'][0]['observed'], other['cases'][0]['observed'])
