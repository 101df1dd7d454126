from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from delay_logistic.models import SimulationRun, SuiteRun
from delay_logistic.services.scenario_service import CaseResult, SuiteReport


class ClassifyApiTests(APITestCase):

    def test_classify(self):
        response = self.client.get(reverse('classify'), {'alpha': '0.5', 'r': '3'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['status'], 'success')
        self.assertEqual(response.data['data']['locally_stable'], 'unstable')

    def test_missing_parameter(self):
        response = self.client.get(reverse('classify'), {'alpha': '0.5'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data['status'], 'error')
        self.assertIn('r', response.data['message'])


class BoundaryApiTests(APITestCase):

    def test_chart_rows(self):
        response = self.client.get(reverse('boundary'), {'alpha_min': '-0.5', 'alpha_max': '0.5', 'n': '3'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        rows = response.data['data']
        self.assertEqual(len(rows), 3)
        self.assertIsNone(rows[0]['exp_solution_r'])
        self.assertIsNotNone(rows[2]['exp_solution_r'])

    def test_range_outside_interval(self):
        response = self.client.get(reverse('boundary'), {'alpha_min': '-2', 'alpha_max': '0.5', 'n': '3'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class SimulateApiTests(APITestCase):

    def test_simulate_records_run(self):
        payload = {'r': 1, 'alpha': 1, 'history': 'stepramp:q=4', 't_end': 1, 'dt_out': 0.05}
        response = self.client.post(reverse('simulate'), payload, format='json')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        data = response.data['data']
        self.assertEqual(data['sidecar']['status'], 'blown_up')
        self.assertEqual(len(data['t']), len(data['x']))
        self.assertLess(max(data['t']), data['sidecar']['t_blowup'])
        self.assertEqual(SimulationRun.objects.get().pk, data['run_id'])

    def test_bad_history(self):
        payload = {'r': 1, 'alpha': 0, 'history': 'nope:v=1', 't_end': 1}
        response = self.client.post(reverse('simulate'), payload, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('nope', response.data['message'])
        self.assertFalse(SimulationRun.objects.exists())


class SuiteRunApiTests(APITestCase):

    def test_lists_recorded_runs(self):
        report = SuiteReport(suite='exponential', seed=3, config={})
        report.cases.append(CaseResult('a', {}, 0.0, 0.0, 1e-8, True, True))
        SuiteRun.from_report(report)

        response = self.client.get(reverse('suite-runs'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        [run] = response.data['data']
        self.assertEqual(run['suite'], 'exponential')
        self.assertEqual(run['seed'], 3)
        self.assertTrue(run['overall_pass'])

    def test_bad_limit(self):
        response = self.client.get(reverse('suite-runs'), {'limit': 'many'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
