# encoding:utf-8
"""
Post-hoc analysis of a SimTrace.
"""
import dataclasses
import math
from typing import List, Optional, Tuple

import numpy as np

from .config import ConfigMixin

# share of the largest envelope value, settling threshold and frequency lock
LOCK_FRACTION = 0.1


@dataclasses.dataclass
class MetricsReport(ConfigMixin):
    """
    exported as JSON with these key names
    """
    envelope: List[Tuple[float, float]]
    settling_time_s: Optional[float]
    updates_total: int
    periods_observed: float
    updates_per_period: Optional[float]
    comm_effort_continuous: Optional[float]
    comm_effort_event: Optional[float]
    reduction_factor: Optional[float]
    omega: Optional[float] = None
    truncated: bool = False
    failure: Optional[str] = None


def envelope_from_events(trace) -> List[Tuple[float, float]]:
    return [(event.t_star, abs(event.amp_signed)) for event in trace.events]


def settling_time(envelope, threshold: float) -> Optional[float]:
    """
    first event time from which every envelope value stays at or below ``threshold``
    """
    if not threshold > 0:
        raise ValueError("threshold must be > 0")
    settled = None
    for t_star, amplitude in envelope:
        if amplitude <= threshold:
            if settled is None:
                settled = t_star
        else:
            settled = None
    return settled


def communication_effort(trace, omega: float, fs: float) -> dict:
    """
    control value transmissions per oscillation period, continuous
    feedback against the event triggered scheme

    the count starts at the first change of ``u_hat``; periods are
    counted as pairs of detected extrema inside the same window
    """
    if not omega > 0:
        raise ValueError("omega must be > 0")
    continuous = 2.0 * math.pi * fs / omega

    u_hat = trace.column("u_hat")
    times = trace.column("t")
    switches = np.flatnonzero(np.diff(u_hat) != 0) + 1
    updates = int(switches.size)

    periods = 0.0
    if updates:
        start = times[switches[0]]
        periods = sum(1 for event in trace.events if event.t_star >= start) / 2.0

    per_period = updates / periods if periods else None
    reduction = continuous / per_period if per_period else None
    return {
        "updates_total": updates,
        "periods_observed": periods,
        "updates_per_period": per_period,
        "comm_effort_continuous": continuous,
        "comm_effort_event": per_period,
        "reduction_factor": reduction,
    }


def dominant_omega(trace, fraction: float = LOCK_FRACTION) -> Optional[float]:
    """
    median detector frequency estimate over the events locked on the
    oscillation: the first two events are skipped and so is every event
    below ``fraction`` of the largest envelope value, the settled tail is
    driven by the held control values and noise
    """
    events = trace.events
    if len(events) < 3:
        return None
    floor = fraction * max(abs(event.amp_signed) for event in events)
    estimates = [event.omega_est for event in events[2:] if abs(event.amp_signed) >= floor]
    if not estimates:
        return None
    return float(np.median(estimates))


def analyze(trace, omega: Optional[float], fs: float, threshold: float = None) -> MetricsReport:
    """
    :param trace: SimTrace
    :param omega: oscillation frequency, None uses :func:`dominant_omega`
    :param fs: sampling frequency, Hz
    :param threshold: settling threshold, defaults to 10% of the largest envelope value
    :return: MetricsReport
    """
    envelope = envelope_from_events(trace)
    if threshold is None and envelope:
        threshold = LOCK_FRACTION * max(amplitude for _, amplitude in envelope)
    settled = settling_time(envelope, threshold) if threshold else None

    omega = omega if omega is not None else dominant_omega(trace)
    if omega:
        effort = communication_effort(trace, omega, fs)
    else:
        effort = {"updates_total": 0, "periods_observed": 0.0, "updates_per_period": None,
                  "comm_effort_continuous": None, "comm_effort_event": None, "reduction_factor": None}
    return MetricsReport(envelope=envelope, settling_time_s=settled, omega=omega,
                         truncated=trace.truncated, failure=trace.failure, **effort)
