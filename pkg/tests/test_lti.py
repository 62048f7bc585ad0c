# encoding:utf-8
import cmath
import math
import unittest

import numpy as np
import numpy.testing

from powercomp import lti
from powercomp.exceptions import LtiError, PoleOnImaginaryAxisError, SingularResolventError
from powercomp.scenarios import case_study_plant


class PolynomialTest(unittest.TestCase):

    def test_trim(self):
        poly = lti.Polynomial([1.0, 2.0, 0.0, 0.0])
        self.assertEqual(poly.degree, 1)
        self.assertEqual(poly(2.0), 5.0)
        self.assertTrue(lti.Polynomial([0.0, 0.0]).is_zero())

    def test_multiply(self):
        self.assertEqual(lti.Polynomial([1.0, 1.0]) * [1.0, -1.0], lti.Polynomial([1.0, 0.0, -1.0]))

    def test_invalid(self):
        with self.assertRaises(LtiError):
            lti.Polynomial([])
        with self.assertRaises(LtiError):
            lti.Polynomial([1.0, math.inf])


class TransferFunctionTest(unittest.TestCase):

    def test_integrator(self):
        tf = lti.TransferFunction([1.0], [0.0, 1.0])
        self.assertAlmostEqual(abs(tf(1.0) - (-1j)), 0.0, places=15)

    def test_first_order(self):
        tf = lti.TransferFunction([1.0], [1.0, 1.0])
        self.assertAlmostEqual(abs(tf(1.0) - (0.5 - 0.5j)), 0.0, places=15)
        self.assertEqual(tf.dc_gain(), 1.0)

    def test_pole_on_axis(self):
        # s / (s^2 + 1)
        tf = lti.TransferFunction([0.0, 1.0], [1.0, 0.0, 1.0])
        with self.assertRaises(PoleOnImaginaryAxisError):
            tf(1.0)

    def test_zero_denominator(self):
        with self.assertRaises(LtiError):
            lti.TransferFunction([1.0], [0.0])

    def test_multiply(self):
        product = lti.TransferFunction([1.0], [1.0, 1.0]) * lti.TransferFunction([2.0], [3.0, 1.0])
        self.assertEqual(product, lti.TransferFunction([2.0], [3.0, 4.0, 1.0]))
        self.assertEqual(lti.TransferFunction.unity()(5.0), 1.0)

    def test_pole_at_origin(self):
        with self.assertRaises(PoleOnImaginaryAxisError):
            lti.TransferFunction([1.0], [0.0, 1.0])(0.0)
        with self.assertRaises(PoleOnImaginaryAxisError):
            lti.TransferFunction([1.0], [0.0, 0.0, 1.0]).dc_gain()

    def test_conjugate_symmetry(self):
        tf = lti.TransferFunction([1.0, 0.3], [2.0, 0.5, 1.0, 0.01])
        for omega in (0.1, 1.3, 16.0, 250.0):
            self.assertAlmostEqual(abs(tf(-omega) - tf(omega).conjugate()), 0.0, places=12)


class StateSpaceTest(unittest.TestCase):

    def setUp(self):
        self.plant = case_study_plant()

    def test_shapes(self):
        with self.assertRaises(LtiError):
            lti.StateSpaceModel([[1.0, 0.0]], [1.0], [1.0])
        with self.assertRaises(LtiError):
            lti.StateSpaceModel(np.eye(2), [[1.0], [0.0], [0.0]], [1.0, 0.0])
        with self.assertRaises(LtiError):
            lti.StateSpaceModel(np.eye(2), [1.0, 0.0], [1.0, 0.0], d_affine=[1.0])
        ss = lti.StateSpaceModel(-np.eye(3), [1.0, 0.0, 0.0], [0.0, 0.0, 1.0])
        self.assertEqual((ss.n_states, ss.n_inputs, ss.n_outputs), (3, 1, 1))
        numpy.testing.assert_array_equal(ss.d_affine, np.zeros(3))

    def test_read_only(self):
        ss = lti.StateSpaceModel(-np.eye(2), [1.0, 0.0], [1.0, 0.0])
        with self.assertRaises(ValueError):
            ss.a[0, 0] = 1.0

    def test_first_order(self):
        ss = lti.StateSpaceModel([[-1.0]], [[1.0]], [[1.0]])
        self.assertAlmostEqual(abs(ss(1.0) - (0.5 - 0.5j)), 0.0, places=15)
        self.assertAlmostEqual(ss.dc_gain(), 1.0)

    def test_affine_term_ignored(self):
        ss = lti.StateSpaceModel([[-1.0]], [[1.0]], [[1.0]], d_affine=[-9.806])
        self.assertAlmostEqual(abs(ss(1.0) - (0.5 - 0.5j)), 0.0, places=15)

    def test_empty(self):
        ss = lti.StateSpaceModel(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), feedthrough=2.0)
        self.assertEqual(ss(3.0), 2.0)

    def test_singular_resolvent(self):
        # undamped oscillator at 1 rad/s
        ss = lti.StateSpaceModel([[0.0, 1.0], [-1.0, 0.0]], [0.0, 1.0], [1.0, 0.0])
        with self.assertRaises(SingularResolventError) as context:
            ss(1.0)
        self.assertTrue(context.exception.condition is None or context.exception.condition > 1e12)

    def test_case_study_cross_check(self):
        model = self.plant.model()
        tf = model.to_transfer_function()
        for omega in np.logspace(-1, 3, 100):
            direct = lti.ss_freq_response(model, omega)
            polynomial = tf(omega)
            self.assertLessEqual(abs(direct - polynomial) / abs(direct), 1e-8)

    def test_conjugate_symmetry(self):
        model = self.plant.model()
        for omega in (0.3, 16.3, 120.0):
            expected = model(omega).conjugate()
            self.assertLessEqual(abs(model(-omega) - expected) / abs(expected), 1e-10)

    def test_cascade_state_order(self):
        actuator = lti.tf_to_ss(self.plant.actuator())
        downstream = self.plant.output_path()
        joined = lti.cascade(actuator, downstream)
        numpy.testing.assert_array_equal(joined.a[:1, :1], actuator.a)
        numpy.testing.assert_array_equal(joined.a[1:, 1:], downstream.a)
        numpy.testing.assert_array_equal(joined.a[:1, 1:], np.zeros((1, 4)))
        numpy.testing.assert_allclose(joined.a[1:, :1], downstream.b[:, :1] @ actuator.c[:1])
        numpy.testing.assert_array_equal(joined.d_affine, np.concatenate([[0.0], downstream.d_affine]))
        numpy.testing.assert_array_equal(joined.c[0, 1:], downstream.c[0])

    def test_actuator_cascade(self):
        model = self.plant.model()
        self.assertEqual(model.n_states, 5)
        response = self.plant.response()
        for omega in (1.0, 16.3, 200.0):
            self.assertAlmostEqual(abs(model(omega) - response(omega)) / abs(response(omega)), 0.0, places=10)

    def test_tf_to_ss(self):
        tf = lti.TransferFunction([3.2811], [1.0, 0.0012])
        ss = lti.tf_to_ss(tf)
        for omega in (0.0, 10.0, 833.0):
            self.assertAlmostEqual(abs(ss(omega) - tf(omega)), 0.0, places=10)
        self.assertEqual(ss.to_transfer_function(), lti.TransferFunction([3.2811 / 0.0012], [1.0 / 0.0012, 1.0]))

    def test_tf_to_ss_direct_term(self):
        tf = lti.TransferFunction([1.0, 2.0], [1.0, 1.0])
        ss = lti.tf_to_ss(tf)
        self.assertEqual(ss.feedthrough, 2.0)
        self.assertAlmostEqual(abs(ss(0.7) - tf(0.7)), 0.0, places=14)
        with self.assertRaises(LtiError):
            lti.tf_to_ss(lti.TransferFunction([0.0, 1.0], [1.0]))


class ForwardGainTest(unittest.TestCase):

    def test_implied_double_integrator(self):
        double_integrator = lti.TransferFunction([1.0], [0.0, 0.0, 1.0])
        for omega in (0.5, 10.0, 100.0):
            gain = lti.implied_forward_gain(double_integrator, omega)
            self.assertAlmostEqual(abs(gain - 1.0), 0.0, places=12)

    def test_implied_first_order_lag(self):
        tau, omega = 0.01, 10.0
        plant = lti.TransferFunction([1.0], [0.0, 0.0, 1.0, tau])
        gain = lti.implied_forward_gain(plant, omega)
        expected = 1.0 / complex(1.0, tau * omega)
        self.assertAlmostEqual(abs(gain - expected), 0.0, places=12)
        self.assertAlmostEqual(abs(gain), 0.995037, places=6)
        self.assertAlmostEqual(cmath.phase(gain), -0.0996687, places=6)

    def test_implied_zero_frequency(self):
        with self.assertRaises(LtiError):
            lti.implied_forward_gain(lti.unity, 0.0)

    def test_blocked_second_order(self):
        # y'' + 2 y' + 100 y = u
        ss = lti.StateSpaceModel([[0.0, 1.0], [-100.0, -2.0]], [0.0, 1.0], [1.0, 0.0])
        path = lti.blocked_path(ss)
        self.assertEqual(path.n_states, 0)
        self.assertEqual(lti.blocked_forward_gain(ss, 10.0), 1.0)

    def test_blocked_case_study(self):
        model = case_study_plant().model()
        path = lti.blocked_path(model)
        self.assertEqual(path.n_states, 3)
        gain = path(16.3)
        self.assertGreater(abs(gain), 0.2)
        self.assertLess(abs(gain), 0.35)

    def test_blocked_needs_position_output(self):
        ss = lti.StateSpaceModel(-np.eye(2), [1.0, 0.0], [0.5, 0.5])
        with self.assertRaises(LtiError):
            lti.blocked_path(ss)

    def test_series(self):
        response = lti.series(lti.TransferFunction([2.0], [1.0]), 1j)
        self.assertEqual(response(3.0), 2j)

    def test_phase_principal(self):
        self.assertEqual(lti.phase_principal(-1.0), math.pi)
        self.assertEqual(lti.phase_principal(complex(-1.0, -0.0)), math.pi)
        self.assertAlmostEqual(lti.phase_principal(-1j), -math.pi / 2)
        self.assertEqual(lti.phase_principal(1.0), 0.0)
        with self.assertRaises(LtiError):
            lti.phase_principal(0.0)


class StepResponseTest(unittest.TestCase):

    def test_first_order(self):
        ss = lti.tf_to_ss(lti.TransferFunction([2.0], [1.0, 1.0]))
        sample = lti.step_response_sampler(ss)
        t = np.linspace(0.0, 5.0, 51)
        numpy.testing.assert_allclose(sample(t), 1.0 - np.exp(-t), atol=1e-6)

    def test_static(self):
        ss = lti.tf_to_ss(lti.TransferFunction([3.0], [1.0]))
        numpy.testing.assert_array_equal(lti.step_response_sampler(ss)(np.arange(3.0)), np.ones(3))
