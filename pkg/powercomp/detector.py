# encoding:utf-8
"""
Online extrema detection of a sampled oscillatory output.

The running max and min of the last ``N + 1`` samples smooth the signal;
a change of the smoothed trend marks an extremum. Each accepted event
carries the signed amplitude relative to the reference offset and the
frequency estimate ``pi / (t_n - t_prev)``.
"""
import collections
import dataclasses
import enum
import math
from typing import Callable, Optional, Union

from .config import ConfigMixin
from .exceptions import ConfigError


class ExtremumKind(str, enum.Enum):
    MAXIMUM = "maximum"
    MINIMUM = "minimum"


@dataclasses.dataclass(frozen=True)
class ExtremumEvent(object):
    """
    one detected extremum

    ``amp_signed`` is read from the running max for a maximum and from the
    running min for a minimum, relative to the reference offset at ``t_star``.
    Its sign follows the output against the reference, not the kind: with a
    fixed reference and an output drifting below it, a maximum carries a
    negative ``amp_signed``.
    """
    index: int
    kind: ExtremumKind
    t_star: float
    amp_signed: float
    omega_est: float

    def to_row(self):
        return self.index, self.kind.value, self.t_star, self.amp_signed, self.omega_est


@dataclasses.dataclass
class DetectorConfig(ConfigMixin):
    """
    :param window_n: N, the smoothing window holds N + 1 samples
    :param fs: sampling frequency, Hz
    :param omega_max: known upper bound of the oscillation frequency, rad/s
    :param psi: reference offset, a constant or a callable of time
    """
    window_n: int
    fs: float
    omega_max: float
    psi: Union[float, Callable[[float], float]] = 0.0

    def __post_init__(self):
        if isinstance(self.window_n, bool) or not isinstance(self.window_n, int) or self.window_n < 1:
            raise ConfigError("detector.window_n must be an integer >= 1, got %r" % (self.window_n,))
        if not self.fs > 0:
            raise ConfigError("detector.fs must be > 0, got %r" % (self.fs,))
        if not self.omega_max > 0:
            raise ConfigError("detector.omega_max must be > 0, got %r" % (self.omega_max,))
        if not self.fs > self.omega_max / math.pi:
            raise ConfigError("detector.fs=%s can't resolve omega_max=%s (needs fs > omega_max/pi)"
                              % (self.fs, self.omega_max))

    def reference(self, t: float) -> float:
        if callable(self.psi):
            return float(self.psi(t))
        return float(self.psi)

    def to_dict(self):
        if callable(self.psi):
            raise ConfigError("a callable detector.psi can't be serialized")
        return super(DetectorConfig, self).to_dict()


class RollingExtrema(object):
    """
    exact max and min of the last ``size`` pushed samples,
    monotonic deques of (index, value), O(1) amortized per sample
    """

    def __init__(self, size: int):
        if size < 1:
            raise ValueError("window size must be >= 1")
        self.size = size
        self._count = 0
        self._maxima = collections.deque()
        self._minima = collections.deque()

    def push(self, value):
        """
        :param value: newest sample
        :return: (max, min) of the window
        """
        index = self._count
        self._count += 1

        maxima, minima = self._maxima, self._minima
        while maxima and maxima[-1][1] <= value:
            maxima.pop()
        maxima.append((index, value))
        while minima and minima[-1][1] >= value:
            minima.pop()
        minima.append((index, value))

        expired = index - self.size
        while maxima[0][0] <= expired:
            maxima.popleft()
        while minima[0][0] <= expired:
            minima.popleft()
        return maxima[0][1], minima[0][1]

    def fill(self, value):
        for _ in range(self.size):
            self.push(value)
        return value, value

    def __len__(self):
        return min(self._count, self.size)


def running_window_extrema(window: RollingExtrema, y_n):
    """
    push ``y_n`` and return the (max, min) of the window
    """
    return window.push(y_n)


@dataclasses.dataclass
class DetectorState(object):
    config: DetectorConfig
    window: RollingExtrema
    prev_smoothed_max: float
    prev_smoothed_min: float
    last_sign: int = 0
    t_star_prev: float = 0.0
    event_index: int = 0
    amp_est: float = 0.0
    omega_est: float = 0.0
    last_kind: Optional[ExtremumKind] = None

    def step(self, y_n: float, n: int) -> Optional[ExtremumEvent]:
        """
        process sample ``n``, called once per sample in order
        :return: ExtremumEvent or None
        """
        config = self.config
        t_n = n / config.fs
        smoothed_max, smoothed_min = self.window.push(y_n)

        if smoothed_max < self.prev_smoothed_max:
            trend = -1
        elif smoothed_min > self.prev_smoothed_min:
            trend = 1
        else:
            trend = 0
        self.prev_smoothed_max = smoothed_max
        self.prev_smoothed_min = smoothed_min

        if trend == 0 or trend == self.last_sign:
            return None
        if self.last_sign == 0:
            # first trend of the run, nothing to compare with yet
            self.last_sign = trend
            return None

        elapsed = t_n - self.t_star_prev
        if elapsed <= 0 or math.pi / elapsed >= config.omega_max:
            return None

        if trend < 0:
            kind = ExtremumKind.MAXIMUM
            amp = smoothed_max - config.reference(t_n)
        else:
            kind = ExtremumKind.MINIMUM
            amp = smoothed_min - config.reference(t_n)
        omega = min(math.pi / elapsed, config.omega_max)

        self.event_index += 1
        self.last_sign = trend
        self.last_kind = kind
        self.t_star_prev = t_n
        self.amp_est = amp
        self.omega_est = omega
        return ExtremumEvent(index=self.event_index, kind=kind, t_star=t_n,
                             amp_signed=amp, omega_est=omega)


def detector_init(config: DetectorConfig, y0: float) -> DetectorState:
    """
    buffers filled with ``y0``, amplitude estimate ``y0 - psi(0)``,
    frequency estimate ``omega_max / 2``
    """
    window = RollingExtrema(config.window_n + 1)
    smoothed_max, smoothed_min = window.fill(y0)
    return DetectorState(config=config, window=window,
                         prev_smoothed_max=smoothed_max,
                         prev_smoothed_min=smoothed_min,
                         amp_est=y0 - config.reference(0.0),
                         omega_est=0.5 * config.omega_max)


def detector_step(state: DetectorState, y_n: float, n: int) -> Optional[ExtremumEvent]:
    return state.step(y_n, n)
