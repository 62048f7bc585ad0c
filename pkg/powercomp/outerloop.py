# encoding:utf-8
import dataclasses
from typing import List, Optional

from .config import ConfigMixin
from .exceptions import ConfigError

ANTI_WINDUP_MODES = ("freeze", "none")


@dataclasses.dataclass
class PIConfig(ConfigMixin):
    """
    v = kp (r1 - y) + ki integral(r1 - y) + r2, clamped to ``v_limits``

    :param kp: proportional gain
    :param ki: integral gain, 0 gives a P controller
    :param r1: output reference
    :param r2: feedforward (gravity compensation)
    :param v_limits: optional [lower, upper]
    :param anti_windup: freeze or none
    :param cutoff_at: output forced to 0 from this time on, s
    """
    kp: float = 0.0
    ki: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    v_limits: Optional[List[float]] = None
    anti_windup: str = "freeze"
    cutoff_at: Optional[float] = None

    def __post_init__(self):
        if not self.kp >= 0:
            raise ConfigError("outer.kp must be >= 0, got %r" % (self.kp,))
        if not self.ki >= 0:
            raise ConfigError("outer.ki must be >= 0, got %r" % (self.ki,))
        if self.v_limits is not None:
            if len(self.v_limits) != 2 or not self.v_limits[0] < self.v_limits[1]:
                raise ConfigError("outer.v_limits must be [lower, upper] with lower < upper, got %r"
                                  % (self.v_limits,))
            self.v_limits = [float(self.v_limits[0]), float(self.v_limits[1])]
        if self.anti_windup not in ANTI_WINDUP_MODES:
            raise ConfigError("outer.anti_windup must be one of %s, got %r"
                              % (ANTI_WINDUP_MODES, self.anti_windup))

    def clamp(self, v: float) -> float:
        if self.v_limits is None:
            return v
        lower, upper = self.v_limits
        return min(max(v, lower), upper)


@dataclasses.dataclass
class PIState(object):
    integral: float = 0.0


def p_step(cfg: PIConfig, y: float) -> float:
    return cfg.kp * (cfg.r1 - y) + cfg.r2


def pi_step(cfg: PIConfig, state: PIState, y: float, dt: float, feed: float = 0.0) -> float:
    """
    forward Euler integral, conditional integration when saturated

    :param feed: extra input added before clamping (the compensator output)
    :return: v
    """
    error = cfg.r1 - y
    candidate = state.integral + error * dt
    unclamped = cfg.kp * error + cfg.ki * candidate + cfg.r2 + feed

    if cfg.v_limits is not None and cfg.anti_windup == "freeze":
        lower, upper = cfg.v_limits
        # the update would push further into saturation
        deepens = (unclamped > upper and error > 0) or (unclamped < lower and error < 0)
        if not deepens:
            state.integral = candidate
    else:
        state.integral = candidate

    v = cfg.kp * error + cfg.ki * state.integral + cfg.r2 + feed
    return cfg.clamp(v)


class OuterLoop(object):
    """
    reference controller of a scenario, P when ``ki == 0``
    """

    def __init__(self, config: PIConfig):
        self.config = config
        self.state = PIState()

    def step(self, y: float, dt: float, t: float, feed: float = 0.0) -> float:
        config = self.config
        if config.cutoff_at is not None and t >= config.cutoff_at:
            return 0.0
        if config.ki == 0:
            return config.clamp(p_step(config, y) + feed)
        return pi_step(config, self.state, y, dt, feed)
