# encoding:utf-8
"""
Power based compensation of an oscillatory output.

At every detected extremum the control value ``u = K w^2 A`` is computed
and held until the next extremum. For plants whose forward path G is not
a pure double integrator input, the value is scaled by ``L / |G(jw)|`` and
applied after ``T = (2 pi + arg G(j2w)) / w``.
"""
import collections
import dataclasses
import enum
import logging
import math
from typing import Deque, Optional, Tuple

import numpy as np
import scipy.integrate

from . import lti
from .config import ConfigMixin
from .detector import ExtremumEvent
from .exceptions import CompensationError, ConfigError, LtiError

logger = logging.getLogger(__name__)

NOTCH_TOLERANCE = 1e-9
FORWARD_PATHS = ("blocked", "implied", "unity")


class CompensatorMode(str, enum.Enum):
    SECOND_ORDER = "second_order"
    HIGHER_ORDER = "higher_order"


def optimal_gain() -> float:
    """
    K = sqrt(3) / (2 pi), balances the control energy of one period
    against the oscillation energy
    """
    return math.sqrt(3.0) / (2.0 * math.pi)


@dataclasses.dataclass
class CompensatorConfig(ConfigMixin):
    """
    :param mode: second_order or higher_order
    :param enabled: compensator output forced to 0 when False
    :param enabled_from: events before this time are ignored, s
    :param k_gain: K
    :param l_weight: impulse weighting L, higher_order only, 1 <= L < 3
    :param forward_path: which realization of G the scenario wiring builds
    :param forward_gain: explicit G, runtime only
    """
    mode: CompensatorMode = CompensatorMode.SECOND_ORDER
    enabled: bool = True
    enabled_from: float = 0.0
    k_gain: float = dataclasses.field(default_factory=lambda: optimal_gain())
    l_weight: float = 1.0
    forward_path: str = "implied"
    forward_gain: Optional[lti.FrequencyResponse] = dataclasses.field(default=None, compare=False, repr=False)

    _transient = ("forward_gain",)

    def __post_init__(self):
        try:
            self.mode = CompensatorMode(self.mode)
        except ValueError:
            raise ConfigError("compensator.mode must be one of %s, got %r"
                              % ([m.value for m in CompensatorMode], self.mode))
        if not isinstance(self.enabled, bool):
            raise ConfigError("compensator.enabled must be true or false, got %r" % (self.enabled,))
        if not self.k_gain > 0:
            raise ConfigError("compensator.k_gain must be > 0, got %r" % (self.k_gain,))
        if self.forward_path not in FORWARD_PATHS:
            raise ConfigError("compensator.forward_path must be one of %s, got %r"
                              % (FORWARD_PATHS, self.forward_path))
        if self.mode is CompensatorMode.HIGHER_ORDER and not 1.0 <= self.l_weight < 3.0:
            raise ConfigError("compensator.l_weight must satisfy 1 <= L < 3, got %r" % (self.l_weight,))


@dataclasses.dataclass
class CompensatorState(object):
    """
    ``u_held`` is the value currently applied to the plant (u in second-order
    mode, the delayed and scaled value in higher-order mode), ``u_raw`` the
    base law value of the last accepted event
    """
    u_held: float = 0.0
    u_raw: float = 0.0
    schedule: Deque[Tuple[float, float]] = dataclasses.field(default_factory=collections.deque)
    last_event: Optional[ExtremumEvent] = None


def base_law(event: ExtremumEvent, k: float) -> float:
    return k * event.omega_est ** 2 * event.amp_signed


def mean_oscillation_power(amp: float, omega: float) -> float:
    return -0.5 * amp ** 2 * omega ** 2


def oscillation_power(amp, omega, t, phase=0.0):
    """
    instantaneous power y'' * y of ``amp * sin(omega t + phase)``
    """
    return -(amp * omega * np.sin(omega * np.asarray(t) + phase)) ** 2


def energy_balance_residual(amp: float, omega: float, u_const: float,
                            phase: float = 0.0, panels: int = 10000) -> float:
    """
    oscillation energy of one period plus the energy of a constant control
    value held over it, both integrated with composite Simpson
    :param panels: even number of Simpson panels
    """
    if not omega > 0:
        raise ValueError("omega must be > 0")
    panels += panels % 2
    t = np.linspace(0.0, 2.0 * math.pi / omega, panels + 1)
    oscillation = scipy.integrate.simpson(oscillation_power(amp, omega, t, phase), x=t)
    control = 0.5 * scipy.integrate.simpson(u_const ** 2 * t ** 2, x=t)
    return float(oscillation + control)


def higher_order_transform(u_value: float, event: ExtremumEvent,
                           cfg: CompensatorConfig) -> Tuple[float, float]:
    """
    :return: (apply_at, value)
    :raise CompensationError: |G(jw)| below 1e-9
    """
    if cfg.forward_gain is None:
        raise ConfigError("higher_order compensation needs a forward gain")
    omega = event.omega_est
    if not omega > 0:
        raise CompensationError("frequency estimate must be > 0, got %r" % omega)

    gain = complex(cfg.forward_gain(omega))
    if abs(gain) < NOTCH_TOLERANCE:
        raise CompensationError("|G(j%.6g)| = %.3e, plant notch at the oscillation frequency"
                                % (omega, abs(gain)))
    try:
        lag = lti.phase_principal(cfg.forward_gain(2.0 * omega))
    except LtiError as exc:
        raise CompensationError(str(exc))

    delay = (2.0 * math.pi + lag) / omega
    return event.t_star + delay, cfg.l_weight * u_value / abs(gain)


def _step_sampler(g_response):
    if isinstance(g_response, lti.StateSpaceModel):
        return lti.step_response_sampler(g_response)
    if isinstance(g_response, lti.TransferFunction):
        return lti.step_response_sampler(lti.tf_to_ss(g_response))
    if callable(g_response):
        return g_response
    raise TypeError("g_response must be a StateSpaceModel, a TransferFunction or a step sampler, got %r"
                    % (g_response,))


def pulse_energy_inequality_check(g_response, u_const: float, omega: float,
                                  samples: int = 2001, rtol: float = 1e-9) -> bool:
    """
    compare a rectangular pulse of one half period with the same pulse
    passed through the plant

    A plain ``omega -> complex`` callable carries no step response; wrap
    such a plant as a TransferFunction or StateSpaceModel first.

    :param g_response: StateSpaceModel, TransferFunction or a callable
        sampling the unity DC step response on a time array
    :return: True when the filtered pulse carries strictly less impulse
    :raise LtiError: the callable doesn't return one real sample per time point
    """
    half_period = math.pi / omega
    t = np.linspace(0.0, half_period, samples)
    step = np.asarray(_step_sampler(g_response)(t))
    if step.shape != t.shape or np.iscomplexobj(step):
        raise LtiError("step sampler must return %d real samples, got %s %s"
                       % (t.size, step.dtype, step.shape))
    step = step.astype(np.float64)
    raw = abs(u_const) * half_period
    filtered = abs(u_const) * scipy.integrate.trapezoid(step, x=t)
    if raw == 0:
        return False
    return bool(raw - filtered > rtol * raw)


class PowerCompensator(object):
    """
    stateful compensator driven by detector events and the simulation clock
    """

    def __init__(self, config: CompensatorConfig, sample_period: float = 0.0):
        """
        :param config: CompensatorConfig
        :param sample_period: 1/fs, scheduled switches snap to the nearest sample
        """
        self.config = config
        self.state = CompensatorState()
        self._tolerance = 0.5 * sample_period

    @property
    def u(self) -> float:
        return self.state.u_raw

    @property
    def u_hat(self) -> float:
        return self.state.u_held

    def on_event(self, event: ExtremumEvent):
        """
        :return: (apply_at, value) of the new control value, None when ignored
        """
        config = self.config
        if not config.enabled or event.t_star < config.enabled_from:
            return None

        state = self.state
        value = base_law(event, config.k_gain)
        state.last_event = event
        state.u_raw = value

        if config.mode is CompensatorMode.SECOND_ORDER:
            state.u_held = value
            return event.t_star, value

        try:
            apply_at, scaled = higher_order_transform(value, event, config)
        except CompensationError as exc:
            logger.warning("event %d skipped: %s", event.index, exc)
            return None

        schedule = state.schedule
        while schedule and schedule[-1][0] >= apply_at:
            schedule.pop()
        schedule.append((apply_at, scaled))
        return apply_at, scaled

    def advance(self, t: float) -> float:
        """
        apply every scheduled switch due at time ``t``
        :return: current output
        """
        schedule = self.state.schedule
        while schedule and schedule[0][0] <= t + self._tolerance:
            _, self.state.u_held = schedule.popleft()
        return self.state.u_held
