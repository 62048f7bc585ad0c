# encoding:utf-8
__version__ = "0.1.0"

from .compensator import CompensatorConfig, PowerCompensator, optimal_gain
from .detector import DetectorConfig, ExtremumEvent, detector_init
from .lti import StateSpaceModel, TransferFunction
from .scenarios import ScenarioConfig, resolve
from .serializers import BaseSerializer
from .simkernel import run
from .trace import SimTrace
