# encoding:utf-8
import unittest

from powercomp.exceptions import ConfigError
from powercomp.outerloop import OuterLoop, PIConfig, PIState, p_step, pi_step


class PIConfigTest(unittest.TestCase):

    def test_validation(self):
        for kwargs in ({"kp": -1.0}, {"ki": -0.1}, {"v_limits": [1.0, 1.0]}, {"v_limits": [0.0]},
                       {"anti_windup": "clamp"}):
            with self.assertRaises(ConfigError):
                PIConfig(**kwargs)

    def test_clamp(self):
        config = PIConfig(v_limits=[0, 10])
        self.assertEqual(config.v_limits, [0.0, 10.0])
        self.assertEqual(config.clamp(-3.0), 0.0)
        self.assertEqual(config.clamp(12.0), 10.0)
        self.assertEqual(config.clamp(4.0), 4.0)
        self.assertEqual(PIConfig().clamp(1e9), 1e9)


class PStepTest(unittest.TestCase):

    def test_proportional(self):
        config = PIConfig(kp=70.0, r1=-0.026, r2=4.0)
        self.assertAlmostEqual(p_step(config, -0.026), 4.0)
        self.assertAlmostEqual(p_step(config, -0.036), 4.0 + 0.7)


class PIStepTest(unittest.TestCase):

    def test_integrates(self):
        config = PIConfig(kp=1.0, ki=2.0, r1=1.0)
        state = PIState()
        v = pi_step(config, state, 0.0, 0.1)
        self.assertAlmostEqual(state.integral, 0.1)
        self.assertAlmostEqual(v, 1.0 + 0.2)
        v = pi_step(config, state, 0.0, 0.1, feed=0.5)
        self.assertAlmostEqual(v, 1.0 + 0.4 + 0.5)

    def test_freeze_when_saturated(self):
        config = PIConfig(kp=150.0, ki=170.0, r1=0.0, v_limits=[0.0, 10.0])
        state = PIState()
        # large positive error saturates the upper limit
        for _ in range(100):
            v = pi_step(config, state, -1.0, 1e-3)
            self.assertEqual(v, 10.0)
        self.assertEqual(state.integral, 0.0)

        # no wound up integral, the output leaves saturation as soon as the error shrinks
        v = pi_step(config, state, -0.01, 1e-3)
        self.assertAlmostEqual(v, 1.5 + 170.0 * 1e-5)
        self.assertAlmostEqual(state.integral, 1e-5)

    def test_no_anti_windup(self):
        config = PIConfig(kp=150.0, ki=170.0, r1=0.0, v_limits=[0.0, 10.0], anti_windup="none")
        state = PIState()
        for _ in range(100):
            pi_step(config, state, -1.0, 1e-3)
        self.assertAlmostEqual(state.integral, 0.1)

    def test_inside_limits(self):
        config = PIConfig(kp=1.0, ki=1.0, r1=1.0, r2=2.0, v_limits=[0.0, 10.0])
        state = PIState()
        v = pi_step(config, state, 0.5, 0.5)
        self.assertAlmostEqual(state.integral, 0.25)
        self.assertAlmostEqual(v, 0.5 + 0.25 + 2.0)


class OuterLoopTest(unittest.TestCase):

    def test_proportional_with_feed(self):
        loop = OuterLoop(PIConfig(kp=70.0, r1=0.0, r2=4.0))
        self.assertAlmostEqual(loop.step(-0.01, 2e-4, 0.0, feed=0.3), 0.7 + 4.0 + 0.3)
        self.assertEqual(loop.state.integral, 0.0)

    def test_cutoff(self):
        loop = OuterLoop(PIConfig(kp=0.0, r2=4.0, cutoff_at=1.0))
        self.assertEqual(loop.step(0.0, 1e-3, 0.999, feed=1.0), 5.0)
        self.assertEqual(loop.step(0.0, 1e-3, 1.0, feed=1.0), 0.0)
        self.assertEqual(loop.step(0.0, 1e-3, 2.0), 0.0)

    def test_pi(self):
        loop = OuterLoop(PIConfig(kp=1.0, ki=10.0, r1=1.0))
        loop.step(0.0, 0.1, 0.0)
        loop.step(0.0, 0.1, 0.1)
        self.assertAlmostEqual(loop.state.integral, 0.2)
