# encoding:utf-8
class PowerCompError(Exception):
    """
    base error of the powercomp package
    """


class ConfigError(PowerCompError):
    """
    invalid configuration, scenario file or override path
    """


class RepeatedValueError(ConfigError):
    """
    repeated value
    """


class LtiError(PowerCompError):
    """
    linear system construction or evaluation error
    """


class PoleOnImaginaryAxisError(LtiError):
    """
    transfer function evaluated at a pole on the imaginary axis
    """


class SingularResolventError(LtiError):
    """
    jwI - A is singular or numerically singular
    """

    def __init__(self, message, condition=None):
        super(SingularResolventError, self).__init__(message)
        self.condition = condition


class CompensationError(PowerCompError):
    """
    compensation impossible, the forward gain has a notch at the oscillation frequency
    """


class SimulationError(PowerCompError):
    """
    simulation error
    """


class NonFiniteStateError(SimulationError):
    """
    integrator produced a nan or inf state
    """


class TraceError(PowerCompError):
    """
    simulation trace error
    """


class SerializerError(PowerCompError):
    """
    Serializer Error
    """
