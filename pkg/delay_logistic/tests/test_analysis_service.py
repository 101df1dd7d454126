import math

import numpy as np
from django.test import SimpleTestCase

from delay_logistic.exceptions import DomainError
from delay_logistic.services import analysis_service
from delay_logistic.services.analysis_service import LocalStability
from delay_logistic.services.equation_service import GenParams, Params


class StabilityBoundaryTests(SimpleTestCase):

    def test_known_values(self):
        self.assertAlmostEqual(analysis_service.stability_boundary_r(0.0), math.pi / 2)
        self.assertAlmostEqual(analysis_service.stability_boundary_r(0.5), math.sqrt(1 / 3) * math.pi / 3)

    def test_domain(self):
        for alpha in (-1.0, 1.0, 2.0):
            with self.assertRaises(DomainError):
                analysis_service.stability_boundary_r(alpha)

    def test_characteristic_root_agrees_with_closed_form(self):
        for alpha in np.linspace(-0.95, 0.95, 50):
            with self.subTest(alpha=alpha):
                closed = analysis_service.stability_boundary_r(alpha)
                numeric = analysis_service.char_root_boundary(alpha)
                self.assertLess(abs(numeric - closed), 1e-9 * max(1.0, closed))


class ClassifyTests(SimpleTestCase):

    def test_globally_stable(self):
        region = analysis_service.classify(Params(r=5.0, alpha=-2.0))
        self.assertTrue(region.globally_stable)
        self.assertTrue(region.bounded_all)
        self.assertEqual(region.locally_stable, LocalStability.STABLE)
        self.assertIsNone(region.boundary_r)

    def test_unstable_with_blowup(self):
        region = analysis_service.classify(Params(r=3.0, alpha=0.5))
        self.assertEqual(region.locally_stable, LocalStability.UNSTABLE)
        self.assertTrue(region.blowup_exists)
        self.assertFalse(region.bounded_all)
        self.assertAlmostEqual(region.boundary_r, 0.6046, places=4)

    def test_locally_stable_below_boundary(self):
        region = analysis_service.classify(Params(r=1.0, alpha=0.0))
        self.assertEqual(region.locally_stable, LocalStability.STABLE)
        self.assertTrue(region.bounded_all)
        self.assertFalse(region.blowup_exists)

    def test_no_equilibrium(self):
        region = analysis_service.classify(Params(r=1.0, alpha=1.0))
        self.assertFalse(region.equilibrium_exists)
        self.assertIsNone(region.locally_stable)
        self.assertTrue(region.unbounded_limsup)
        self.assertIsNone(region.as_dict()['locally_stable'])

    def test_on_the_boundary(self):
        r_star = analysis_service.stability_boundary_r(0.3)
        self.assertEqual(analysis_service.classify(Params(r=r_star, alpha=0.3)).locally_stable,
                         LocalStability.BOUNDARY)


class ExponentialSolutionTests(SimpleTestCase):

    def test_single_delay_rate(self):
        self.assertAlmostEqual(analysis_service.exp_solution_rate(math.exp(-1.0)), 1.0)
        with self.assertRaises(DomainError):
            analysis_service.exp_solution_rate(1.5)
        with self.assertRaises(DomainError):
            analysis_service.exp_solution_rate(0.0)

    def test_multi_delay_rate(self):
        rate = analysis_service.exp_solution_rate_gen(((0.5, 0.0), (-1.0, 1.0)))
        self.assertAlmostEqual(rate, math.log(2.0), places=10)
        residual = analysis_service.exponential_residual(GenParams(r=rate, terms=((0.5, 0.0), (-1.0, 1.0))))
        self.assertLess(abs(residual), 1e-10)

    def test_multi_delay_without_root(self):
        self.assertIsNone(analysis_service.exp_solution_rate_gen(((1.0, 0.0), (1.0, 1.0))))
        with self.assertRaises(DomainError):
            analysis_service.exp_solution_rate_gen(((1.0, 0.0), (-1.0, 1.0)), (2.0, 1.0))

    def test_close_roots_need_a_narrow_bracket(self):
        # residual (y - 0.5)(y - 0.505) in y = e^{-r}: both roots inside one scan cell of (0, 50)
        terms = ((0.2525, 0.0), (-1.005, 1.0), (1.0, 2.0))
        self.assertIsNone(analysis_service.exp_solution_rate_gen(terms))
        rate = analysis_service.exp_solution_rate_gen(terms, (0.68, 0.70))
        self.assertAlmostEqual(rate, -math.log(0.505), places=9)

    def test_rates_in_angle(self):
        omega = math.pi / 3
        self.assertAlmostEqual(analysis_service.boundary_rate_in_angle(omega), omega * math.tan(omega / 2))
        self.assertAlmostEqual(analysis_service.exponential_rate_in_angle(omega), math.log(2.0))
        with self.assertRaises(DomainError):
            analysis_service.boundary_rate_in_angle(math.pi / 2)

    def test_angle_forms_match_the_alpha_forms(self):
        omega = 0.8
        alpha = math.cos(omega)
        self.assertAlmostEqual(analysis_service.boundary_rate_in_angle(omega),
                               analysis_service.stability_boundary_r(alpha), places=12)
        self.assertAlmostEqual(analysis_service.exponential_rate_in_angle(omega),
                               analysis_service.exp_solution_rate(alpha), places=12)

    def test_exponential_locus_lies_in_the_unstable_region(self):
        self.assertTrue(analysis_service.exponential_locus_dominates())
        with self.assertRaises(DomainError):
            analysis_service.exponential_locus_dominates(n=10)


class ComparisonTests(SimpleTestCase):

    def test_lower_bound(self):
        self.assertAlmostEqual(analysis_service.blowup_time_lower_bound(1.0, 1.0), math.log(1.0 + math.e))
        with self.assertRaises(DomainError):
            analysis_service.blowup_time_lower_bound(1.0, 0.0)

    def test_comparison_solution(self):
        r, c = 1.0, 2.0
        self.assertAlmostEqual(analysis_service.comparison_solution(r, c, 0.0), c)
        # y' = r y (1 + e^{-r} y)
        t, h = 0.3, 1e-6
        y = analysis_service.comparison_solution(r, c, t)
        slope = (analysis_service.comparison_solution(r, c, t + h)
                 - analysis_service.comparison_solution(r, c, t - h)) / (2 * h)
        self.assertAlmostEqual(slope / (r * y * (1 + math.exp(-r) * y)), 1.0, places=5)
        with self.assertRaises(DomainError):
            analysis_service.comparison_solution(r, c, analysis_service.blowup_time_lower_bound(r, c))

    def test_a_priori_bound(self):
        self.assertEqual(analysis_service.a_priori_bound(-0.5, 1.0, 2.0, 1.5), 2.0)
        self.assertEqual(analysis_service.a_priori_bound(-0.5, 1.0, 3.0, 3.0), 3.0)
        self.assertAlmostEqual(analysis_service.a_priori_bound(0.0, 1.0, 5.0, 1.0), 5.0)
        with self.assertRaises(DomainError):
            analysis_service.a_priori_bound(0.5, 1.0, 1.0, 1.0)


class StabilityChartTests(SimpleTestCase):

    def test_columns_and_blank_exponential_curve(self):
        frame = analysis_service.stability_chart(-0.5, 0.5, 5)
        self.assertEqual(list(frame.columns), ['alpha', 'r_boundary', 'exp_solution_r'])
        self.assertEqual(len(frame), 5)
        self.assertTrue(frame['exp_solution_r'][:3].isna().all())
        self.assertTrue(frame['exp_solution_r'][3:].notna().all())
        self.assertAlmostEqual(frame['r_boundary'][2], math.pi / 2)

    def test_range_must_lie_inside_the_interval(self):
        with self.assertRaises(DomainError):
            analysis_service.stability_chart(-1.0, 0.5, 5)
        with self.assertRaises(DomainError):
            analysis_service.stability_chart(-0.5, 0.5, 1)
