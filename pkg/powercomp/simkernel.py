# encoding:utf-8
"""
Fixed step hybrid simulation.

Per sample n (t_n = n / fs): measure the noisy output, feed the detector,
let the compensator react and apply due switches, step the outer loop,
record the row, then integrate the plant over the sample period with
every input held constant (zero-order hold).
"""
import dataclasses
import logging
import math
from typing import Callable, Optional, Union

import numpy as np
import scipy.signal

from .compensator import CompensatorMode, PowerCompensator
from .config import ConfigMixin
from .detector import detector_init
from .exceptions import ConfigError, NonFiniteStateError
from .outerloop import OuterLoop
from .trace import SimTrace

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class SimConfig(ConfigMixin):
    """
    :param fs: controller and measurement rate, Hz
    :param substeps: integration steps per sample
    :param duration: s
    :param seed: noise generator seed
    :param noise_sigma: standard deviation of the white noise before filtering
    :param noise_cutoff: low-pass cutoff, Hz, None means fs / 10
    :param divergence_limit: stop the run when |y - psi| exceeds it
    """
    fs: float = 1000.0
    substeps: int = 1
    duration: float = 10.0
    seed: int = 0
    noise_sigma: float = 0.0
    noise_cutoff: Optional[float] = None
    divergence_limit: Optional[float] = None

    def __post_init__(self):
        if not self.fs > 0:
            raise ConfigError("sim.fs must be > 0, got %r" % (self.fs,))
        if not self.duration > 0:
            raise ConfigError("sim.duration must be > 0, got %r" % (self.duration,))
        if isinstance(self.substeps, bool) or not isinstance(self.substeps, int) or self.substeps < 1:
            raise ConfigError("sim.substeps must be an integer >= 1, got %r" % (self.substeps,))
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError("sim.seed must be a 64-bit unsigned integer, got %r" % (self.seed,))
        if not self.noise_sigma >= 0:
            raise ConfigError("sim.noise_sigma must be >= 0, got %r" % (self.noise_sigma,))
        if self.noise_cutoff is not None and not 0 < self.noise_cutoff:
            raise ConfigError("sim.noise_cutoff must be > 0, got %r" % (self.noise_cutoff,))
        if self.divergence_limit is not None and not self.divergence_limit > 0:
            raise ConfigError("sim.divergence_limit must be > 0, got %r" % (self.divergence_limit,))

    @property
    def sample_count(self) -> int:
        """
        samples recorded by a complete run, ceil(duration * fs) + 1
        """
        return int(math.ceil(self.duration * self.fs - 1e-9)) + 1

    @property
    def cutoff(self) -> float:
        return self.fs / 10.0 if self.noise_cutoff is None else self.noise_cutoff


@dataclasses.dataclass
class StateLimiter(ConfigMixin):
    """
    mechanical stop on one state, an inelastic impact zeroes ``velocity_index``
    """
    state_index: int
    lower: float
    upper: float
    velocity_index: Optional[int] = None

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ConfigError("limiter bounds must satisfy lower < upper, got [%r, %r]"
                              % (self.lower, self.upper))


@dataclasses.dataclass
class Disturbance(ConfigMixin):
    """
    rectangular pulse added to a state derivative (``target`` = state index)
    or to the plant input (``target`` = "input")
    """
    time: float
    target: Union[int, str]
    magnitude: float
    width: float = 0.02

    def __post_init__(self):
        if self.target != "input" and (isinstance(self.target, bool) or not isinstance(self.target, int)):
            raise ConfigError("disturbance target must be a state index or \"input\", got %r"
                              % (self.target,))
        if not self.width > 0:
            raise ConfigError("disturbance width must be > 0, got %r" % (self.width,))

    def active(self, t: float) -> bool:
        return self.time <= t < self.time + self.width


def rk4_step(deriv: Callable[[float, np.ndarray], np.ndarray], x, t: float, h: float):
    """
    classical fourth order Runge-Kutta step, inputs frozen inside ``deriv``
    :raise NonFiniteStateError: the new state holds nan or inf
    """
    if not h > 0:
        raise ValueError("step size must be > 0, got %r" % h)
    k1 = deriv(t, x)
    k2 = deriv(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = deriv(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = deriv(t + h, x + h * k3)
    result = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(result)):
        raise NonFiniteStateError("non finite state at t=%.6g: %s" % (t + h, result))
    return result


def apply_limiter(x, lim: StateLimiter):
    """
    clamp ``x[state_index]`` into [lower, upper], an active clamp zeroes the velocity
    :return: the same array, modified in place
    """
    value = x[lim.state_index]
    if value < lim.lower or value > lim.upper:
        x[lim.state_index] = min(max(value, lim.lower), lim.upper)
        if lim.velocity_index is not None:
            x[lim.velocity_index] = 0.0
    return x


class NoiseSource(object):
    """
    seeded gaussian white noise through a first order low-pass

    n_k = alpha n_(k-1) + (1 - alpha) w_k,  alpha = exp(-2 pi fc / fs)
    """

    def __init__(self, sigma: float, cutoff: float, fs: float, seed: int = 0):
        self.sigma = float(sigma)
        self.alpha = math.exp(-2.0 * math.pi * cutoff / fs)
        self._rng = np.random.default_rng(seed)
        self._last = 0.0

    def sample(self) -> float:
        if self.sigma == 0:
            return 0.0
        white = self.sigma * self._rng.standard_normal()
        self._last = self.alpha * self._last + (1.0 - self.alpha) * white
        return self._last

    def block(self, n: int) -> np.ndarray:
        """
        next ``n`` samples, continuing the filter state
        """
        if self.sigma == 0 or n == 0:
            return np.zeros(n)
        white = self.sigma * self._rng.standard_normal(n)
        filtered, _ = scipy.signal.lfilter([1.0 - self.alpha], [1.0, -self.alpha], white,
                                           zi=[self.alpha * self._last])
        self._last = float(filtered[-1])
        return filtered


def noise_sample(source: NoiseSource) -> float:
    return source.sample()


def run(scenario, metadata=None) -> SimTrace:
    """
    simulate a validated ScenarioConfig

    :param scenario: ScenarioConfig
    :param metadata: dict merged into the trace metadata (override echo)
    :return: SimTrace, ``truncated`` set when the state left the finite
        range or the divergence limit
    """
    sim = scenario.sim
    model = scenario.plant.model()
    detector_config = scenario.detector
    dt = 1.0 / sim.fs
    h = dt / sim.substeps
    total = sim.sample_count

    compensator = None
    if scenario.compensator is not None:
        config = scenario.compensator
        if config.mode is CompensatorMode.HIGHER_ORDER and config.forward_gain is None:
            config = dataclasses.replace(config, forward_gain=scenario.forward_gain())
        compensator = PowerCompensator(config, sample_period=dt)
    outer = OuterLoop(scenario.outer) if scenario.outer is not None else None

    noise = NoiseSource(sim.noise_sigma, sim.cutoff, sim.fs, sim.seed).block(total)
    echo = {"scenario": scenario.to_dict()}
    echo.update(metadata or {})
    trace = SimTrace(total, metadata=echo)

    x = np.array(scenario.initial_state, dtype=np.float64)
    a = model.a
    b = model.b[:, 0]
    limiters = scenario.limiters
    disturbances = scenario.disturbances
    logger.info("run %s: %d samples at %s Hz", scenario.name, total, sim.fs)

    detector = None
    for n in range(total):
        t_n = n / sim.fs
        y = model.output(x)
        y_noisy = y + noise[n]

        if detector is None:
            detector = detector_init(detector_config, y_noisy)
        else:
            event = detector.step(y_noisy, n)
            if event is not None:
                trace.add_event(event)
                if compensator is not None:
                    compensator.on_event(event)

        u_raw = u_hat = 0.0
        if compensator is not None:
            u_hat = compensator.advance(t_n)
            u_raw = compensator.u
        v = outer.step(y_noisy, dt, t_n, feed=u_hat) if outer is not None else u_hat
        trace.add((t_n, y, y_noisy, u_raw, u_hat, v))

        if sim.divergence_limit is not None:
            offset = abs(y - detector_config.reference(t_n))
            if offset > sim.divergence_limit:
                trace.truncate("diverged: |y - psi| = %.6g exceeds %.6g at t=%.6g"
                               % (offset, sim.divergence_limit, t_n))
                break
        if n == total - 1:
            break

        plant_input = v
        forcing = model.d_affine.copy()
        for disturbance in disturbances:
            if disturbance.active(t_n):
                if disturbance.target == "input":
                    plant_input += disturbance.magnitude
                else:
                    forcing[disturbance.target] += disturbance.magnitude
        drive = b * plant_input + forcing

        def deriv(_, state):
            return a @ state + drive

        try:
            for k in range(sim.substeps):
                x = rk4_step(deriv, x, t_n + k * h, h)
                for limiter in limiters:
                    apply_limiter(x, limiter)
        except NonFiniteStateError as exc:
            trace.truncate(str(exc))
            break

    if trace.truncated:
        logger.warning("run %s truncated after %d samples: %s", scenario.name, trace.length(), trace.failure)
    else:
        logger.info("run %s finished with %d events", scenario.name, len(trace.events))
    return trace
