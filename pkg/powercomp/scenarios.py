# encoding:utf-8
"""
Named scenario builders.

State order of the case-study plant after cascading the actuator:
``[actuator, z', z, y', y]`` (indices 0..4), so the actuator velocity is
index 1, the actuator position index 2 and the load velocity index 3.
"""
import collections
import dataclasses
import inspect
import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np

from . import lti
from .compensator import CompensatorConfig, CompensatorMode
from .config import ConfigMixin
from .detector import DetectorConfig
from .exceptions import ConfigError, LtiError
from .outerloop import PIConfig
from .simkernel import Disturbance, SimConfig, StateLimiter
from .utils import check_array_repeated, set_dotted

logger = logging.getLogger(__name__)

CASE_STUDY_A = ((-333.35, -333.33, 0.015, 333.33),
                (1.0, 0.0, 0.0, 0.0),
                (0.012, 266.66, -0.012, -266.66),
                (0.0, 0.0, 1.0, 0.0))
CASE_STUDY_B = (1.667, 0.0, 0.0, 0.0)
CASE_STUDY_C = (0.0, 0.0, 0.0, 1.0)
CASE_STUDY_D = (-9.806, 0.0, -9.806, 0.0)
# 3.2811 / (0.0012 s + 1), ascending powers
ACTUATOR_NUM = (3.2811,)
ACTUATOR_DEN = (1.0, 0.0012)
ACTUATOR_STROKE = (0.0, 0.021)
MID_STROKE = 0.0105

SECOND_ORDER_FS = 1000.0
SECOND_ORDER_WINDOW_N = 30
CASE_STUDY_FS = 5000.0
CASE_STUDY_WINDOW_N = 75
P_GAIN = 70.0
PI_GAINS = (150.0, 170.0)
V_LIMITS = (0.0, 10.0)
COMPENSATOR_ON_AT = 4.0
CUTOFF_AT = 20.0
DISTURBANCE_TIMES = (17.0, 30.0)
DISTURBANCE_WIDTH = 0.02
OMEGA_MAX_FACTOR = 3.0
# the PI loop lets the rig mode grow at about 0.7 1/s; at the optimal K the
# implied |G| divides the pulse down below what L < 3 can make up for
RIG_K_GAIN = 0.75
RIG_NOISE_SIGMA = 1e-4

# actuator state index offsets in the cascaded model
ACTUATOR_VELOCITY = 1
ACTUATOR_POSITION = 2
LOAD_VELOCITY = 3

CONSTANTS = {
    "A": CASE_STUDY_A,
    "B": CASE_STUDY_B,
    "C": CASE_STUDY_C,
    "D": CASE_STUDY_D,
    "actuator_num": ACTUATOR_NUM,
    "actuator_den": ACTUATOR_DEN,
    "stroke": ACTUATOR_STROKE,
    "p_gain": P_GAIN,
    "pi_gains": PI_GAINS,
    "v_limits": V_LIMITS,
    "fs_second_order": SECOND_ORDER_FS,
    "window_n_second_order": SECOND_ORDER_WINDOW_N,
    "fs_case_study": CASE_STUDY_FS,
    "compensator_on_at": COMPENSATOR_ON_AT,
    "cutoff_at": CUTOFF_AT,
    "disturbance_times": DISTURBANCE_TIMES,
}

Equilibrium = collections.namedtuple("Equilibrium", ["r1", "rho", "r2"])


@dataclasses.dataclass
class PlantConfig(ConfigMixin):
    """
    state-space path, optionally driven through an actuator transfer function
    """
    a: List[List[float]]
    b: List[float]
    c: List[float]
    d_affine: Optional[List[float]] = None
    actuator_num: Optional[List[float]] = None
    actuator_den: Optional[List[float]] = None

    def __post_init__(self):
        if (self.actuator_num is None) != (self.actuator_den is None):
            raise ConfigError("plant.actuator_num and plant.actuator_den must be given together")
        try:
            self.model()
        except LtiError as exc:
            raise ConfigError("invalid plant: %s" % exc)

    def output_path(self) -> lti.StateSpaceModel:
        return lti.StateSpaceModel(self.a, self.b, self.c, self.d_affine)

    def actuator(self) -> Optional[lti.TransferFunction]:
        if self.actuator_num is None:
            return None
        return lti.TransferFunction(self.actuator_num, self.actuator_den)

    def model(self) -> lti.StateSpaceModel:
        """
        the simulated model, actuator states first
        """
        actuator = self.actuator()
        if actuator is None:
            return self.output_path()
        return lti.cascade(lti.tf_to_ss(actuator), self.output_path())

    def response(self) -> lti.FrequencyResponse:
        """
        H from the control input to the output
        """
        actuator = self.actuator()
        if actuator is None:
            return self.output_path()
        return lti.series(actuator, self.output_path())


@dataclasses.dataclass
class ScenarioConfig(ConfigMixin):
    name: str
    plant: PlantConfig
    detector: DetectorConfig
    sim: SimConfig
    initial_state: List[float]
    outer: Optional[PIConfig] = None
    compensator: Optional[CompensatorConfig] = None
    disturbances: List[Disturbance] = dataclasses.field(default_factory=list)
    limiters: List[StateLimiter] = dataclasses.field(default_factory=list)
    description: str = ""
    params: Dict[str, Any] = dataclasses.field(default_factory=dict)

    _nested = {
        "plant": PlantConfig,
        "detector": DetectorConfig,
        "sim": SimConfig,
        "outer": PIConfig,
        "compensator": CompensatorConfig,
        "disturbances": [Disturbance],
        "limiters": [StateLimiter],
    }

    def __post_init__(self):
        n = self.plant.model().n_states
        if len(self.initial_state) != n:
            raise ConfigError("initial_state needs %d values, got %d" % (n, len(self.initial_state)))
        self.initial_state = [float(value) for value in self.initial_state]
        if self.detector.fs != self.sim.fs:
            raise ConfigError("detector.fs (%s) must equal sim.fs (%s)" % (self.detector.fs, self.sim.fs))
        for index, limiter in enumerate(self.limiters):
            for attr in ("state_index", "velocity_index"):
                value = getattr(limiter, attr)
                if value is not None and not 0 <= value < n:
                    raise ConfigError("limiters.%d.%s=%r is not a state index below %d" % (index, attr, value, n))
        for index, disturbance in enumerate(self.disturbances):
            if disturbance.target != "input" and not 0 <= disturbance.target < n:
                raise ConfigError("disturbances.%d.target=%r is not a state index below %d"
                                  % (index, disturbance.target, n))
            if not 0 <= disturbance.time <= self.sim.duration:
                raise ConfigError("disturbances.%d.time=%r lies outside the run" % (index, disturbance.time))

    def forward_gain(self) -> lti.FrequencyResponse:
        """
        G used by higher-order compensation, chosen by ``compensator.forward_path``
        """
        kind = self.compensator.forward_path if self.compensator is not None else "implied"
        if kind == "unity":
            return lti.unity
        if kind == "implied":
            response = self.plant.response()
            return lambda omega: lti.implied_forward_gain(response, omega)
        try:
            path = lti.blocked_path(self.plant.model())
        except LtiError as exc:
            raise ConfigError("forward_path=blocked: %s" % exc)
        return path


def gravity_equilibrium(stroke: float = MID_STROKE) -> Equilibrium:
    """
    rest point of the case-study plant with the actuator at ``stroke``:
    both velocity rows of x' = A x + B rho + D set to zero
    """
    a, b, d = np.array(CASE_STUDY_A), np.array(CASE_STUDY_B), np.array(CASE_STUDY_D)
    rows = [0, 2]
    matrix = np.array([[a[row, 3], b[row]] for row in rows])
    rhs = -np.array([a[row, 1] * stroke + d[row] for row in rows])
    r1, rho = np.linalg.solve(matrix, rhs)
    r2 = rho / lti.TransferFunction(ACTUATOR_NUM, ACTUATOR_DEN).dc_gain().real
    return Equilibrium(float(r1), float(rho), float(r2))


def case_study_resonance() -> float:
    """
    imaginary part of the dominant complex eigenvalue pair of A
    """
    return float(np.max(np.linalg.eigvals(np.array(CASE_STUDY_A)).imag))


def case_study_plant() -> PlantConfig:
    return PlantConfig(a=[list(row) for row in CASE_STUDY_A], b=list(CASE_STUDY_B),
                       c=list(CASE_STUDY_C), d_affine=list(CASE_STUDY_D),
                       actuator_num=list(ACTUATOR_NUM), actuator_den=list(ACTUATOR_DEN))


def _case_study_state(equilibrium: Equilibrium, stroke: float, load_offset: float = 0.0):
    actuator = lti.tf_to_ss(lti.TransferFunction(ACTUATOR_NUM, ACTUATOR_DEN))
    actuator_state = np.linalg.solve(actuator.a, -actuator.b[:, 0] * equilibrium.r2)
    return list(actuator_state) + [0.0, stroke, 0.0, equilibrium.r1 + load_offset]


def _case_study_detector(psi: float) -> DetectorConfig:
    return DetectorConfig(window_n=CASE_STUDY_WINDOW_N, fs=CASE_STUDY_FS,
                          omega_max=OMEGA_MAX_FACTOR * case_study_resonance(), psi=psi)


def scenario_second_order(a: float = 2.0, b: float = 100.0, c: float = 2.0,
                          compensator_on: bool = False, duration: float = 10.0) -> ScenarioConfig:
    """
    y'' + a y' + b y = u, y(0) = c
    """
    if not b > 0:
        raise ConfigError("second-order scenario needs b > 0, got %r" % (b,))
    return ScenarioConfig(
        name="second-order",
        description="y'' + a y' + b y = u with power based compensation",
        params={"a": a, "b": b, "c": c, "compensator_on": compensator_on, "duration": duration},
        plant=PlantConfig(a=[[0.0, 1.0], [-b, -a]], b=[0.0, 1.0], c=[1.0, 0.0], d_affine=[0.0, 0.0]),
        detector=DetectorConfig(window_n=SECOND_ORDER_WINDOW_N, fs=SECOND_ORDER_FS,
                                omega_max=OMEGA_MAX_FACTOR * math.sqrt(b), psi=0.0),
        sim=SimConfig(fs=SECOND_ORDER_FS, duration=duration),
        compensator=CompensatorConfig(mode=CompensatorMode.SECOND_ORDER, enabled=compensator_on),
        initial_state=[c, 0.0],
    )


def scenario_fifth_order_sim(l_weight: float = 2.0, comp_on_at: float = COMPENSATOR_ON_AT,
                             compensator_on: bool = True, forward_path: str = "implied",
                             initial_offset: float = 0.002, noise_sigma: float = 2e-5,
                             duration: float = 10.0, stroke: float = MID_STROKE) -> ScenarioConfig:
    """
    actuator and two-mass plant under v = 70 (R1 - y) + R2 + u_hat
    """
    equilibrium = gravity_equilibrium(stroke)
    return ScenarioConfig(
        name="fifth-order-sim",
        description="case-study plant, proportional loop, higher-order compensation",
        params={"l_weight": l_weight, "comp_on_at": comp_on_at, "compensator_on": compensator_on,
                "forward_path": forward_path, "initial_offset": initial_offset,
                "noise_sigma": noise_sigma, "duration": duration, "stroke": stroke},
        plant=case_study_plant(),
        outer=PIConfig(kp=P_GAIN, ki=0.0, r1=equilibrium.r1, r2=equilibrium.r2),
        detector=_case_study_detector(equilibrium.r1),
        compensator=CompensatorConfig(mode=CompensatorMode.HIGHER_ORDER, enabled=compensator_on,
                                      enabled_from=comp_on_at, l_weight=l_weight,
                                      forward_path=forward_path),
        sim=SimConfig(fs=CASE_STUDY_FS, duration=duration, noise_sigma=noise_sigma),
        initial_state=_case_study_state(equilibrium, stroke, initial_offset),
    )


def scenario_fifth_order_pi(disturb: bool = True, compensator_on: bool = True,
                            l_weight: float = 2.0, comp_on_at: float = COMPENSATOR_ON_AT,
                            forward_path: str = "implied", k_gain: float = RIG_K_GAIN,
                            initial_offset: float = 2e-4, noise_sigma: float = RIG_NOISE_SIGMA,
                            duration: float = 40.0, stroke: float = MID_STROKE) -> ScenarioConfig:
    """
    emulated rig: PI loop with saturated input, impulses on the actuator and the load

    ``k_gain`` keeps ``L k_gain w^2 / |G|`` between the rig growth and the
    proportional gain: the held values average to ``c (y - psi)``, which
    acts as positive feedback against ``kp`` on the slow loop
    """
    equilibrium = gravity_equilibrium(stroke)
    disturbances = []
    if disturb:
        disturbances = [
            Disturbance(time=DISTURBANCE_TIMES[0], target=ACTUATOR_VELOCITY, magnitude=10.0,
                        width=DISTURBANCE_WIDTH),
            Disturbance(time=DISTURBANCE_TIMES[1], target=LOAD_VELOCITY, magnitude=0.5,
                        width=DISTURBANCE_WIDTH),
        ]
        disturbances = [item for item in disturbances if item.time <= duration]
    return ScenarioConfig(
        name="fifth-order-pi",
        description="emulated rig, saturated PI loop, impulse disturbances",
        params={"disturb": disturb, "compensator_on": compensator_on, "l_weight": l_weight,
                "comp_on_at": comp_on_at, "forward_path": forward_path, "k_gain": k_gain,
                "initial_offset": initial_offset, "noise_sigma": noise_sigma,
                "duration": duration, "stroke": stroke},
        plant=case_study_plant(),
        outer=PIConfig(kp=PI_GAINS[0], ki=PI_GAINS[1], r1=equilibrium.r1, r2=equilibrium.r2,
                       v_limits=list(V_LIMITS), anti_windup="freeze"),
        detector=_case_study_detector(equilibrium.r1),
        compensator=CompensatorConfig(mode=CompensatorMode.HIGHER_ORDER, enabled=compensator_on,
                                      enabled_from=comp_on_at, k_gain=k_gain, l_weight=l_weight,
                                      forward_path=forward_path),
        sim=SimConfig(fs=CASE_STUDY_FS, duration=duration, noise_sigma=noise_sigma,
                      divergence_limit=0.02),
        disturbances=disturbances,
        initial_state=_case_study_state(equilibrium, stroke, initial_offset),
    )


def scenario_free_fall(limiter: bool = True, cutoff_at: float = CUTOFF_AT,
                       duration: float = 30.0, stroke: float = MID_STROKE) -> ScenarioConfig:
    """
    gravity compensated rest, actuation cut at ``cutoff_at``, the actuator
    falls onto its lower stop
    """
    equilibrium = gravity_equilibrium(stroke)
    # load rest position with the actuator on the lower stop
    rest = gravity_equilibrium(ACTUATOR_STROKE[0]).r1
    limiters = []
    if limiter:
        limiters = [StateLimiter(state_index=ACTUATOR_POSITION, lower=ACTUATOR_STROKE[0],
                                 upper=ACTUATOR_STROKE[1], velocity_index=ACTUATOR_VELOCITY)]
    return ScenarioConfig(
        name="free-fall",
        description="actuation cut off, impact on the lower stop excites the spring mode",
        params={"limiter": limiter, "cutoff_at": cutoff_at, "duration": duration, "stroke": stroke},
        plant=case_study_plant(),
        outer=PIConfig(kp=0.0, ki=0.0, r1=equilibrium.r1, r2=equilibrium.r2, cutoff_at=cutoff_at),
        detector=_case_study_detector(rest),
        sim=SimConfig(fs=CASE_STUDY_FS, duration=duration),
        limiters=limiters,
        initial_state=_case_study_state(equilibrium, stroke),
    )


SCENARIOS = collections.OrderedDict([
    ("second-order", scenario_second_order),
    ("fifth-order-sim", scenario_fifth_order_sim),
    ("fifth-order-pi", scenario_fifth_order_pi),
    ("free-fall", scenario_free_fall),
])


def describe(name: str) -> str:
    return SCENARIOS[name]().description


def builder_parameters(name: str):
    return list(inspect.signature(SCENARIOS[name]).parameters)


def apply_overrides(data: dict, paths=(), duration=None, fs=None, seed=None,
                    no_compensator=False) -> dict:
    """
    apply dotted-path overrides and the run switches to a scenario dict in place
    """
    for key, value in paths:
        set_dotted(data, key, value)
    if duration is not None:
        data["sim"]["duration"] = duration
    if fs is not None:
        data["sim"]["fs"] = fs
        data["detector"]["fs"] = fs
    if seed is not None:
        data["sim"]["seed"] = seed
    if no_compensator and data.get("compensator") is not None:
        data["compensator"]["enabled"] = False
    return data


def resolve(name: str, overrides=(), duration=None, fs=None, seed=None,
            no_compensator=False) -> ScenarioConfig:
    """
    build a named scenario and apply overrides

    :param name: scenario name
    :param overrides: [(key, value), ...], a key naming a builder parameter
        (``a`` or ``params.a``) rebuilds the scenario, any other key is a
        dotted path into the scenario dict
    :raise ConfigError: unknown scenario, unknown path or invalid result
    """
    if name not in SCENARIOS:
        raise ConfigError("unknown scenario %r, choose from %s" % (name, ", ".join(SCENARIOS)))
    overrides = list(overrides)
    check_array_repeated(overrides)

    parameters = builder_parameters(name)
    kwargs, paths = {}, []
    for key, value in overrides:
        bare = key[len("params."):] if key.startswith("params.") else key
        if bare in parameters:
            kwargs[bare] = value
        else:
            paths.append((key, value))
    if duration is not None and "duration" in parameters:
        kwargs["duration"] = duration

    try:
        scenario = SCENARIOS[name](**kwargs)
    except TypeError as exc:
        raise ConfigError("scenario %s: %s" % (name, exc))

    data = apply_overrides(scenario.to_dict(), paths, duration, fs, seed, no_compensator)
    logger.debug("scenario %s resolved with %d overrides", name, len(overrides))
    return ScenarioConfig.from_dict(data)
