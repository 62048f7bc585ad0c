# encoding:utf-8
"""
Continuous-time LTI systems and their complex frequency responses.

A *frequency-response function* is any callable ``omega -> complex``;
:class:`TransferFunction` and :class:`StateSpaceModel` instances are
themselves such callables (SISO path, first input to first output).
"""
import dataclasses
import math
from typing import Callable, Union

import control
import numpy as np
import scipy.signal
from numpy.polynomial import polynomial as P

from .exceptions import LtiError, PoleOnImaginaryAxisError, SingularResolventError

FrequencyResponse = Callable[[float], complex]

POLE_TOLERANCE = 1e-12
CONDITION_LIMIT = 1e12


class Polynomial(object):
    """
    real polynomial in s, coefficients in ascending powers
    """

    def __init__(self, coeffs):
        """
        :param coeffs: sequence of real coefficients, ``coeffs[k]`` multiplies s**k
        """
        array = np.atleast_1d(np.asarray(coeffs, dtype=np.float64))
        if array.ndim != 1 or array.size == 0:
            raise LtiError("polynomial needs a flat, non empty coefficient list")
        if not np.all(np.isfinite(array)):
            raise LtiError("polynomial coefficients must be finite")
        array = P.polytrim(array)
        array.flags.writeable = False
        self.coeffs = array

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0.0

    def __call__(self, s):
        return P.polyval(s, self.coeffs)

    def __mul__(self, other):
        return Polynomial(P.polymul(self.coeffs, _as_polynomial(other).coeffs))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return "Polynomial(%s)" % self.coeffs.tolist()


def _as_polynomial(value):
    if isinstance(value, Polynomial):
        return value
    return Polynomial(value)


class TransferFunction(object):
    """
    rational transfer function num(s)/den(s)
    """

    def __init__(self, num, den):
        """
        :param num: Polynomial or ascending coefficients
        :param den: Polynomial or ascending coefficients, not identically zero
        """
        self.num = _as_polynomial(num)
        self.den = _as_polynomial(den)
        if self.den.is_zero():
            raise LtiError("transfer function denominator is identically zero")

    @classmethod
    def unity(cls):
        return cls([1.0], [1.0])

    def is_proper(self) -> bool:
        return self.num.degree <= self.den.degree

    def dc_gain(self) -> complex:
        return tf_freq_response(self, 0.0)

    def __call__(self, omega) -> complex:
        return tf_freq_response(self, omega)

    def __mul__(self, other):
        return TransferFunction(self.num * other.num, self.den * other.den)

    def __eq__(self, other):
        if not isinstance(other, TransferFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __repr__(self):
        return "TransferFunction(num=%s, den=%s)" % (self.num.coeffs.tolist(), self.den.coeffs.tolist())


@dataclasses.dataclass(frozen=True, eq=False)
class StateSpaceModel(object):
    """
    x' = A x + B u + d_affine,  y = C x + feedthrough * u

    ``d_affine`` is a constant additive input (gravity in the case study),
    it never enters a transfer path. ``feedthrough`` is the scalar direct
    term of the first input/output pair.
    """
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d_affine: np.ndarray = None
    feedthrough: float = 0.0

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise LtiError("A must be square, got shape %s" % (a.shape,))
        n = a.shape[0]

        b = np.array(self.b, dtype=np.float64)
        if b.ndim <= 1:
            b = b.reshape(n, -1) if b.size else np.zeros((n, 1))
        if b.ndim != 2 or b.shape[0] != n:
            raise LtiError("B must have %d rows, got shape %s" % (n, b.shape))

        c = np.array(self.c, dtype=np.float64)
        if c.ndim <= 1:
            c = c.reshape(-1, n) if c.size else np.zeros((1, n))
        if c.ndim != 2 or c.shape[1] != n:
            raise LtiError("C must have %d columns, got shape %s" % (n, c.shape))

        if self.d_affine is None:
            d = np.zeros(n)
        else:
            d = np.array(self.d_affine, dtype=np.float64).reshape(-1)
        if d.shape != (n,):
            raise LtiError("d_affine must have length %d, got %d" % (n, d.size))

        for name, array in (("a", a), ("b", b), ("c", c), ("d_affine", d)):
            if not np.all(np.isfinite(array)):
                raise LtiError("%s must be finite" % name)
            array.flags.writeable = False
            object.__setattr__(self, name, array)
        object.__setattr__(self, "feedthrough", float(self.feedthrough))

    @property
    def n_states(self) -> int:
        return self.a.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.b.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.c.shape[0]

    def derivative(self, x, u):
        return self.a @ x + self.b[:, 0] * u + self.d_affine

    def output(self, x, u=0.0):
        return float(self.c[0] @ x + self.feedthrough * u)

    def dc_gain(self) -> float:
        """
        -C A^-1 B + feedthrough
        :raise LtiError: A singular
        """
        if self.n_states == 0:
            return self.feedthrough
        try:
            x = np.linalg.solve(self.a, self.b[:, 0])
        except np.linalg.LinAlgError:
            raise LtiError("A is singular, the DC gain is undefined")
        return float(-self.c[0] @ x + self.feedthrough)

    def to_transfer_function(self, input_index=0, output_index=0) -> TransferFunction:
        """
        expand det(sI - A) and C adj(sI - A) B with the Faddeev-LeVerrier recursion
        :return: TransferFunction
        """
        n = self.n_states
        if n == 0:
            return TransferFunction([self.feedthrough], [1.0])

        b = self.b[:, input_index]
        c = self.c[output_index]
        ident = np.eye(n)
        den = np.zeros(n + 1)
        den[n] = 1.0
        num = np.zeros(n + 1)
        m = np.zeros((n, n))
        for k in range(1, n + 1):
            m = self.a @ m + den[n - k + 1] * ident
            num[n - k] = c @ m @ b
            den[n - k] = -np.trace(self.a @ m) / k
        return TransferFunction(num + self.feedthrough * den, den)

    def __call__(self, omega) -> complex:
        return ss_freq_response(self, omega)


def tf_freq_response(tf: TransferFunction, omega: float) -> complex:
    """
    num(jw)/den(jw)
    :param tf: TransferFunction
    :param omega: rad/s
    :raise PoleOnImaginaryAxisError: |den(jw)| zero or below 1e-12 of its coefficient scale
    """
    s = 1j * omega
    den = complex(tf.den(s))
    powers = np.abs(omega) ** np.arange(tf.den.coeffs.size)
    scale = float(np.sum(np.abs(tf.den.coeffs) * powers))
    if den == 0 or abs(den) <= POLE_TOLERANCE * max(scale, np.finfo(np.float64).tiny):
        raise PoleOnImaginaryAxisError("transfer function has a pole at s = %sj" % omega)
    return complex(tf.num(s)) / den


def ss_freq_response(ss: StateSpaceModel, omega: float, input_index=0, output_index=0) -> complex:
    """
    C (jwI - A)^-1 B + feedthrough, solved by LU with partial pivoting
    :param ss: StateSpaceModel
    :param omega: rad/s
    :raise SingularResolventError: jwI - A singular, carries the condition estimate
    """
    n = ss.n_states
    direct = ss.feedthrough if (input_index, output_index) == (0, 0) else 0.0
    if n == 0:
        return complex(direct)

    resolvent = 1j * omega * np.eye(n) - ss.a
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = float(np.linalg.cond(resolvent))
    if not math.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularResolventError("jwI - A is singular at omega=%s (condition %.3e)"
                                     % (omega, condition), condition)
    try:
        x = np.linalg.solve(resolvent, ss.b[:, input_index])
    except np.linalg.LinAlgError:
        raise SingularResolventError("jwI - A is singular at omega=%s" % omega, condition)
    return complex(ss.c[output_index] @ x + direct)


def implied_forward_gain(plant_v_to_y: FrequencyResponse, omega: float) -> complex:
    """
    G(jw) = (jw)^2 H(jw), the forward path without the terminal double integrator
    :raise LtiError: omega <= 0
    """
    if omega <= 0:
        raise LtiError("double integrator factorization is undefined at omega=%s" % omega)
    return (1j * omega) ** 2 * complex(plant_v_to_y(omega))


def phase_principal(value: complex) -> float:
    """
    argument in (-pi, pi], the negative real axis maps to +pi
    """
    value = complex(value)
    if value == 0:
        raise LtiError("phase of zero is undefined")
    if value.imag == 0 and value.real < 0:
        return math.pi
    return math.atan2(value.imag, value.real)


def unity(omega: float) -> complex:
    return 1 + 0j


def as_response(value: Union[FrequencyResponse, complex, float]) -> FrequencyResponse:
    if callable(value):
        return value
    constant = complex(value)
    return lambda omega: constant


def series(a, b) -> FrequencyResponse:
    """
    pointwise product of two frequency responses (constants accepted)
    """
    first, second = as_response(a), as_response(b)

    def response(omega):
        return complex(first(omega)) * complex(second(omega))

    return response


def tf_to_ss(tf: TransferFunction) -> StateSpaceModel:
    """
    controllable canonical realization of a proper transfer function
    """
    if not tf.is_proper():
        raise LtiError("improper transfer function has no state-space realization")
    if tf.den.degree == 0:
        gain = tf.num.coeffs[0] / tf.den.coeffs[0]
        return StateSpaceModel(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), feedthrough=gain)
    # scipy wants descending powers
    a, b, c, d = scipy.signal.tf2ss(tf.num.coeffs[::-1], tf.den.coeffs[::-1])
    return StateSpaceModel(a, b, c, feedthrough=float(np.asarray(d).reshape(-1)[0]))


def _as_control(ss: StateSpaceModel) -> control.StateSpace:
    return control.ss(ss.a, ss.b[:, :1], ss.c[:1], [[ss.feedthrough]])


def cascade(upstream: StateSpaceModel, downstream: StateSpaceModel) -> StateSpaceModel:
    """
    series interconnection, the upstream output drives the downstream input,
    states are stacked as [upstream, downstream]
    """
    joined = control.series(_as_control(upstream), _as_control(downstream))
    d = np.concatenate([upstream.d_affine, downstream.d_affine])
    return StateSpaceModel(np.asarray(joined.A), np.asarray(joined.B), np.asarray(joined.C), d,
                           feedthrough=float(np.asarray(joined.D).reshape(-1)[0]))


def _output_indices(ss: StateSpaceModel, output_index=0):
    row = ss.c[output_index]
    selected = np.flatnonzero(row)
    if selected.size != 1 or row[selected[0]] != 1.0:
        raise LtiError("output must select exactly one position state")
    position = int(selected[0])
    rate_row = ss.a[position]
    rate = np.flatnonzero(rate_row)
    if rate.size != 1 or rate_row[rate[0]] != 1.0 or rate[0] == position \
            or ss.b[position, 0] != 0.0:
        raise LtiError("output state needs an explicit rate state (x_y' = x_v)")
    return position, int(rate[0])


def blocked_path(ss: StateSpaceModel, output_index=0) -> StateSpaceModel:
    """
    path from the input to the output acceleration with the output
    position and rate held at zero, i.e. what drives the terminal double integrator
    """
    position, rate = _output_indices(ss, output_index)
    rest = [i for i in range(ss.n_states) if i not in (position, rate)]
    a = ss.a[np.ix_(rest, rest)]
    b = ss.b[rest, :1]
    c = ss.a[rate, rest].reshape(1, len(rest))
    return StateSpaceModel(a, b, c, feedthrough=ss.b[rate, 0])


def blocked_forward_gain(ss: StateSpaceModel, omega: float) -> complex:
    return ss_freq_response(blocked_path(ss), omega)


def step_response_sampler(ss: StateSpaceModel) -> Callable[[np.ndarray], np.ndarray]:
    """
    step response normalized to unity DC gain
    :return: callable, time array -> response array
    """
    gain = ss.dc_gain()
    if abs(gain) < POLE_TOLERANCE:
        raise LtiError("zero DC gain, the step response can't be normalized")

    if ss.n_states == 0:
        return lambda t: np.ones_like(np.asarray(t, dtype=np.float64))

    system = (ss.a, ss.b[:, :1], ss.c[:1], np.array([[ss.feedthrough]]))

    def sample(t):
        t = np.asarray(t, dtype=np.float64)
        _, response = scipy.signal.step(system, T=t)
        return np.asarray(response, dtype=np.float64) / gain

    return sample
