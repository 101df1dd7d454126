import math

from django.test import SimpleTestCase

from delay_logistic.exceptions import ContractViolation, InvalidParameterError
from delay_logistic.services import equation_service
from delay_logistic.services.equation_service import GenParams, Params, RawParams


class ParamsTests(SimpleTestCase):

    def test_rejects_nonpositive_rate(self):
        with self.assertRaises(InvalidParameterError):
            Params(r=0.0, alpha=0.5)
        with self.assertRaises(InvalidParameterError):
            Params(r=-1.0, alpha=0.5)

    def test_rejects_non_finite_values(self):
        with self.assertRaises(InvalidParameterError):
            Params(r=1.0, alpha=math.nan)

    def test_gen_params_require_sorted_distinct_delays(self):
        with self.assertRaises(InvalidParameterError):
            GenParams(r=1.0, terms=((1.0, 1.0), (-1.0, 0.5)))
        with self.assertRaises(InvalidParameterError):
            GenParams(r=1.0, terms=((1.0, 1.0), (-1.0, 1.0)))
        with self.assertRaises(InvalidParameterError):
            GenParams(r=1.0, terms=((1.0, 0.0),))

    def test_gen_params_split_instantaneous_and_lagged_terms(self):
        g = GenParams(r=2.0, terms=((0.5, 0.0), (-1.0, 0.3), (-0.2, 1.5)))
        self.assertEqual(g.instantaneous, 0.5)
        self.assertEqual(g.lagged_terms, ((-1.0, 0.3), (-0.2, 1.5)))
        self.assertEqual(g.max_delay, 1.5)


class EquationServiceTests(SimpleTestCase):

    def test_rhs(self):
        p = Params(r=1.0, alpha=0.5)
        self.assertEqual(equation_service.rhs(p, 2.0, 1.0), 2.0)
        self.assertEqual(equation_service.rhs(p, 0.0, 7.0), 0.0)

    def test_equilibrium_exists_only_below_one(self):
        self.assertAlmostEqual(equation_service.equilibrium(Params(1.0, 0.5)).value, 2.0)
        self.assertAlmostEqual(equation_service.equilibrium(Params(1.0, -1.0)).value, 0.5)
        self.assertFalse(equation_service.equilibrium(Params(1.0, 1.0)).exists)
        self.assertFalse(equation_service.equilibrium(Params(1.0, 3.0)).exists)

    def test_equilibrium_is_a_fixed_point(self):
        for alpha in (-3.0, -0.5, 0.0, 0.9):
            p = Params(r=2.0, alpha=alpha)
            x_star = equation_service.equilibrium(p).value
            self.assertAlmostEqual(equation_service.rhs(p, x_star, x_star), 0.0, places=12)

    def test_normalize(self):
        normalization = equation_service.normalize(RawParams(r_tilde=2.0, a=1.0, b=4.0, tau=0.5))
        self.assertAlmostEqual(normalization.params.r, 1.0)
        self.assertAlmostEqual(normalization.params.alpha, 0.25)
        self.assertAlmostEqual(normalization.state_scale, 2.0)
        self.assertAlmostEqual(normalization.time_scale, 0.5)

    def test_normalized_right_hand_side_matches_raw_equation(self):
        raw = RawParams(r_tilde=1.5, a=0.7, b=2.0, tau=0.8)
        normalization = equation_service.normalize(raw)
        general = equation_service.raw_as_general(raw)
        n_now, n_delayed = 0.9, 1.3
        dn_ds = equation_service.rhs_gen(general, n_now, [n_now, n_delayed])
        x_now, x_delayed = n_now * normalization.state_scale, n_delayed * normalization.state_scale
        dx_dt = equation_service.rhs(normalization.params, x_now, x_delayed)
        # x(t) = k N(tau t)  =>  x' = k tau N'
        self.assertAlmostEqual(dx_dt, normalization.state_scale * raw.tau * dn_ds, places=12)

    def test_to_raw_inverts_the_scaling(self):
        normalization = equation_service.normalize(RawParams(r_tilde=2.0, a=1.0, b=4.0, tau=0.5))
        s, n = equation_service.to_raw(normalization, 3.0, 6.0)
        self.assertAlmostEqual(s, 1.5)
        self.assertAlmostEqual(n, 3.0)

    def test_general_form_agrees_with_single_delay(self):
        p = Params(r=1.3, alpha=-0.4)
        g = equation_service.as_general(p)
        self.assertAlmostEqual(equation_service.rhs_gen(g, 1.7, [1.7, 0.6]), equation_service.rhs(p, 1.7, 0.6))

    def test_rhs_gen_checks_arity(self):
        g = GenParams(r=1.0, terms=((0.5, 0.0), (-1.0, 1.0)))
        with self.assertRaises(ContractViolation):
            equation_service.rhs_gen(g, 1.0, [1.0])
