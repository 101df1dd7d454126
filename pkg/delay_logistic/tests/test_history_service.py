import math
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from delay_logistic.exceptions import (
    ContractViolation,
    DomainError,
    HistorySpecError,
    InvalidConstructionError,
)
from delay_logistic.services import history_service
from delay_logistic.services.equation_service import Params
from delay_logistic.services.history_service import ExpProfileHistory, OrderRelation, StepRampHistory


class HistoryConstructionTests(SimpleTestCase):

    def test_constant(self):
        h = history_service.make_constant(2.5)
        self.assertEqual(h.eval(-1.0), 2.5)
        self.assertEqual(h(0.0), 2.5)
        with self.assertRaises(InvalidConstructionError):
            history_service.make_constant(0.0)

    def test_evaluation_outside_domain(self):
        h = history_service.make_constant(1.0)
        with self.assertRaises(DomainError):
            h.eval(0.1)
        with self.assertRaises(DomainError):
            h.eval(-1.5)

    def test_step_ramp(self):
        h = history_service.make_step_ramp(1.0, -0.5, 4.0)
        self.assertEqual(h.eval(-0.75), 1.0)
        self.assertAlmostEqual(h.eval(-0.25), 2.5)
        self.assertEqual(h.eval(0.0), 4.0)
        self.assertAlmostEqual(h.sup(), 4.0)

    def test_blowup_seed(self):
        p = Params(r=2.0, alpha=0.5)
        h = history_service.make_blowup_seed(p, 4.0)
        self.assertIsInstance(h, StepRampHistory)
        self.assertAlmostEqual(h.eval(0.0), 4.0)
        self.assertEqual(h.eval(-0.5), 1.0)
        with self.assertRaises(InvalidConstructionError):
            history_service.make_blowup_seed(Params(r=1.0, alpha=0.0), 4.0)
        with self.assertRaises(InvalidConstructionError):
            history_service.make_blowup_seed(p, 1.5)

    def test_exponential_families_touch_at_zero(self):
        c, r = 2.0, 1.0
        below = history_service.make_below_exponential(c, r, 0.5)
        above = history_service.make_above_exponential(c, r, 0.5)
        self.assertAlmostEqual(below.eval(0.0), c)
        self.assertAlmostEqual(above.eval(0.0), c)
        self.assertLess(below.eval(-1.0), c * math.exp(-r))
        self.assertGreater(above.eval(-1.0), c * math.exp(-r))
        self.assertAlmostEqual(below.psi(-1.0), -0.5)

    def test_tabulated_history(self):
        h = history_service.make_tabulated([-1.0, -0.5, 0.0], [1.0, 2.0, 3.0])
        self.assertEqual(h.start, -1.0)
        self.assertAlmostEqual(h.eval(-0.5), 2.0)
        self.assertAlmostEqual(h.eval(0.0), 3.0)
        with self.assertRaises(InvalidConstructionError):
            history_service.make_tabulated([-1.0, 0.0], [1.0, -1.0])
        with self.assertRaises(InvalidConstructionError):
            history_service.make_tabulated([-1.0, -0.1], [1.0, 1.0])

    def test_random_histories_are_reproducible(self):
        first = history_service.make_random(np.random.default_rng(7))
        second = history_service.make_random(np.random.default_rng(7))
        grid = np.linspace(-1.0, 0.0, 101)
        np.testing.assert_array_equal(first.eval_many(grid), second.eval_many(grid))
        self.assertTrue(np.all(first.eval_many(grid) > 0))


class CertifyOrderTests(SimpleTestCase):

    def setUp(self):
        self.p = Params(r=1.0, alpha=math.exp(-1.0))

    def test_below_and_above(self):
        below = history_service.make_below_exponential(1.0, 1.0, 0.5)
        above = history_service.make_above_exponential(1.0, 1.0, 0.5)
        self.assertEqual(history_service.certify_order(below, self.p, 1.0, 1000).relation,
                         OrderRelation.BELOW_EXPONENTIAL)
        self.assertEqual(history_service.certify_order(above, self.p, 1.0, 1000).relation,
                         OrderRelation.ABOVE_EXPONENTIAL)

    def test_exact_exponential_and_oscillating_are_neither(self):
        exact = history_service.make_exponential(1.0, 1.0)
        oscillating = history_service.make_oscillating(1.0, 1.0, 0.3, 2)
        for h in (exact, oscillating):
            self.assertEqual(history_service.certify_order(h, self.p, 1.0, 500).relation, OrderRelation.NEITHER)

    def test_wrong_anchor_is_neither(self):
        below = history_service.make_below_exponential(1.0, 1.0, 0.5)
        self.assertEqual(history_service.certify_order(below, self.p, 2.0, 1000).relation, OrderRelation.NEITHER)

    def test_grid_must_be_fine_enough(self):
        with self.assertRaises(ContractViolation):
            history_service.certify_order(history_service.make_constant(1.0), self.p, 1.0, 50)


class ParseSpecTests(SimpleTestCase):

    def setUp(self):
        self.p = Params(r=1.0, alpha=1.0)

    def test_kinds(self):
        self.assertEqual(history_service.parse_spec('const:v=2', self.p).eval(-0.3), 2.0)
        self.assertEqual(history_service.parse_spec('stepramp:q=4', self.p).eval(0.0), 4.0)
        exp = history_service.parse_spec('exp:c=1.5', self.p)
        self.assertIsInstance(exp, ExpProfileHistory)
        self.assertAlmostEqual(exp.eval(-1.0), 1.5 * math.exp(-1.0))
        self.assertEqual(history_service.parse_spec('osc:c=1,delta=0.2,k=3', self.p).profile.wavenumber, 3)

    def test_aliases(self):
        self.assertEqual(history_service.parse_spec('below:c=1,delta=0.5', self.p),
                         history_service.parse_spec('thm2:c=1,delta=0.5', self.p))
        self.assertEqual(history_service.parse_spec('above:c=1,delta=0.5', self.p),
                         history_service.parse_spec('thm3:c=1,delta=0.5', self.p))

    def test_e_notation(self):
        self.assertEqual(history_service.parse_spec('const:v=2.5e-1', self.p).eval(0.0), 0.25)

    def test_errors_name_the_offending_token(self):
        cases = {
            'const': 'const',
            'foo:v=1': 'foo',
            'const:v=abc': 'v=abc',
            'exp:c=1,z=3': 'z=3',
            'thm2:c=1': 'delta',
            'const:v=1,v=2': 'v=2',
            'osc:c=1,delta=0.1,k=1.5': 'k=1.5',
        }
        for spec, token in cases.items():
            with self.subTest(spec=spec):
                with self.assertRaises(HistorySpecError) as cm:
                    history_service.parse_spec(spec, self.p)
                self.assertEqual(cm.exception.token, token)
                self.assertIn(token, str(cm.exception))

    def test_invalid_values_are_spec_errors(self):
        with self.assertRaises(HistorySpecError):
            history_service.parse_spec('const:v=-1', self.p)

    def test_table(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'history.csv')
            with open(path, 'w') as f:
                f.write('s,phi\n-1,1\n-0.5,2\n0,1.5\n')
            h = history_service.parse_spec(f'table:{path}', self.p)
            self.assertAlmostEqual(h.eval(-0.5), 2.0)

            bad = os.path.join(tmp, 'bad.csv')
            with open(bad, 'w') as f:
                f.write('time,value\n-1,1\n0,1\n')
            with self.assertRaises(HistorySpecError):
                history_service.parse_spec(f'table:{bad}', self.p)

        with self.assertRaises(HistorySpecError):
            history_service.parse_spec('table:/nonexistent/history.csv', self.p)
