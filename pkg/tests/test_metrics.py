# encoding:utf-8
import math
import unittest

from powercomp import metrics, scenarios
from powercomp.detector import ExtremumEvent, ExtremumKind
from powercomp.simkernel import run
from powercomp.trace import SimTrace


def make_trace(u_hat, events=()):
    trace = SimTrace(len(u_hat))
    for n, value in enumerate(u_hat):
        trace.add((n * 0.1, 0.0, 0.0, value, value, value))
    for index, event in enumerate(events, 1):
        t_star, amp, omega = (tuple(event) + (10.0,))[:3]
        kind = ExtremumKind.MAXIMUM if amp > 0 else ExtremumKind.MINIMUM
        trace.add_event(ExtremumEvent(index=index, kind=kind, t_star=t_star, amp_signed=amp, omega_est=omega))
    return trace


class SettlingTimeTest(unittest.TestCase):

    def test_final_run(self):
        envelope = [(0.0, 1.0), (1.0, 0.05), (2.0, 0.2), (3.0, 0.08), (4.0, 0.01)]
        self.assertEqual(metrics.settling_time(envelope, 0.1), 3.0)
        self.assertEqual(metrics.settling_time(envelope, 2.0), 0.0)

    def test_never_settles(self):
        self.assertIsNone(metrics.settling_time([(0.0, 1.0), (1.0, 0.5)], 0.1))
        self.assertIsNone(metrics.settling_time([], 0.1))

    def test_threshold(self):
        with self.assertRaises(ValueError):
            metrics.settling_time([(0.0, 1.0)], 0.0)


class CommunicationEffortTest(unittest.TestCase):

    def test_counts(self):
        trace = make_trace([0.0, 0.0, 1.0, 1.0, -1.0, 2.0],
                           events=[(0.05, 1.0), (0.15, -0.9), (0.35, 0.8), (0.45, -0.7)])
        effort = metrics.communication_effort(trace, 10.0, 1000.0)
        self.assertEqual(effort["updates_total"], 3)
        # events from the first switch at t=0.2 on
        self.assertEqual(effort["periods_observed"], 1.0)
        self.assertEqual(effort["updates_per_period"], 3.0)
        self.assertAlmostEqual(effort["comm_effort_continuous"], 2.0 * math.pi * 100.0)
        self.assertAlmostEqual(effort["reduction_factor"], 2.0 * math.pi * 100.0 / 3.0)

    def test_no_updates(self):
        effort = metrics.communication_effort(make_trace([0.0] * 4), 10.0, 1000.0)
        self.assertEqual(effort["updates_total"], 0)
        self.assertIsNone(effort["updates_per_period"])
        self.assertIsNone(effort["reduction_factor"])

    def test_invalid_omega(self):
        with self.assertRaises(ValueError):
            metrics.communication_effort(make_trace([0.0]), 0.0, 1000.0)

    def test_second_order_run(self):
        trace = run(scenarios.scenario_second_order(a=-1.0, compensator_on=True))
        effort = metrics.communication_effort(trace, 10.0, 1000.0)
        self.assertAlmostEqual(effort["comm_effort_continuous"], 628.3, places=1)
        self.assertAlmostEqual(effort["updates_per_period"], 2.0, delta=0.2)
        self.assertGreater(effort["reduction_factor"], 250.0)


class AnalyzeTest(unittest.TestCase):

    def test_empty(self):
        report = metrics.analyze(make_trace([0.0] * 3), None, 1000.0)
        self.assertEqual(report.envelope, [])
        self.assertIsNone(report.settling_time_s)
        self.assertIsNone(report.omega)
        self.assertEqual(report.updates_total, 0)
        self.assertIsNone(report.comm_effort_continuous)
        self.assertFalse(report.truncated)

    def test_dominant_omega(self):
        trace = make_trace([0.0, 1.0, 2.0], events=[(0.05, 1.0), (0.1, -0.9), (0.15, 0.5)])
        self.assertEqual(metrics.dominant_omega(trace), 10.0)
        self.assertIsNone(metrics.dominant_omega(make_trace([0.0], events=[(0.05, 1.0)])))

    def test_dominant_omega_skips_tail(self):
        # settled tail driven by the held values, far from the oscillation frequency
        events = [(0.05, 1.0, 30.0), (0.1, -0.9, 14.0), (0.15, 0.8, 10.0), (0.2, -0.6, 10.2),
                  (0.25, 0.4, 9.9), (0.3, -0.01, 25.0), (0.35, 0.005, 27.0), (0.4, -0.004, 26.0),
                  (0.45, 0.003, 28.0), (0.5, -0.002, 24.0)]
        trace = make_trace([0.0, 1.0, 2.0], events=events)
        self.assertEqual(metrics.dominant_omega(trace), 10.0)
        self.assertEqual(metrics.dominant_omega(trace, fraction=0.0), 24.5)
        settled = make_trace([0.0], events=[(0.05, 1.0), (0.1, -0.9), (0.15, 0.01)])
        self.assertIsNone(metrics.dominant_omega(settled))

    def test_stable_run(self):
        trace = run(scenarios.scenario_second_order(a=-1.0, compensator_on=True))
        report = metrics.analyze(trace, None, 1000.0)
        self.assertAlmostEqual(report.omega, 10.0, delta=1.0)
        self.assertIsNotNone(report.settling_time_s)
        self.assertLess(report.settling_time_s, 5.0)
        self.assertEqual(report.envelope[0], (trace.events[0].t_star, abs(trace.events[0].amp_signed)))
        data = report.to_dict()
        for key in ("envelope", "settling_time_s", "updates_per_period", "reduction_factor"):
            self.assertIn(key, data)

    def test_truncated_run(self):
        scenario = scenarios.resolve("second-order", [("a", -1.0), ("sim.divergence_limit", 5.0)])
        report = metrics.analyze(run(scenario), 10.0, 1000.0)
        self.assertTrue(report.truncated)
        self.assertIn("diverged", report.failure)
