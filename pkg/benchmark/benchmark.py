# encoding:utf-8

import numpy
import pytest

from powercomp import scenarios, simkernel
from powercomp.detector import DetectorConfig, RollingExtrema, detector_init
from powercomp.trace import SimTrace
from powercomp.trace.pandas import to_dataframe


class InitData(object):
    def __init__(self, fs=1000.0, omega=10.0, seed=7):
        self.fs = fs
        self.omega = omega
        self.rng = numpy.random.default_rng(seed)

    def prepare_sinusoid(self, length, sigma=0.0):
        t = numpy.arange(length) / self.fs
        return numpy.sin(self.omega * t) + sigma * self.rng.standard_normal(length)

    def prepare_trace(self, length):
        trace = SimTrace(length)
        array = numpy.zeros(length, dtype=trace.dtype)
        array["t"] = numpy.arange(length) / self.fs
        array["y"] = self.prepare_sinusoid(length)
        trace.add_many(array)
        return trace


init_data = InitData()


@pytest.mark.benchmark(group="window", disable_gc=True)
@pytest.mark.parametrize("size", [31, 151, 1001])
def test_rolling_extrema(benchmark, size):
    data = init_data.prepare_sinusoid(100000, sigma=0.02)

    @benchmark
    def bench():
        window = RollingExtrema(size)
        for value in data:
            window.push(value)


@pytest.mark.benchmark(group="detector", disable_gc=True)
@pytest.mark.parametrize("length", [1000, 10000, 100000])
def test_detector_throughput(benchmark, length):
    config = DetectorConfig(window_n=30, fs=init_data.fs, omega_max=30.0)
    data = init_data.prepare_sinusoid(length, sigma=0.02)

    @benchmark
    def bench():
        state = detector_init(config, data[0])
        for n in range(1, length):
            state.step(data[n], n)


@pytest.mark.benchmark(group="simulation", disable_gc=True)
@pytest.mark.parametrize("compensator_on", [False, True])
def test_second_order_run(benchmark, compensator_on):
    scenario = scenarios.scenario_second_order(a=-1.0, compensator_on=compensator_on)

    @benchmark
    def bench():
        simkernel.run(scenario)


@pytest.mark.benchmark(group="trace", disable_gc=True)
@pytest.mark.parametrize("length", [1000, 10000, 100000])
def test_trace_get_slice(benchmark, length):
    trace = init_data.prepare_trace(length)
    end = (length - 1) / init_data.fs

    @benchmark
    def bench():
        trace.get_slice(0.25 * end, 0.75 * end)


@pytest.mark.benchmark(group="trace", disable_gc=True)
@pytest.mark.parametrize("length", [1000, 10000, 100000])
def test_trace_to_dataframe(benchmark, length):
    trace = init_data.prepare_trace(length)

    @benchmark
    def bench():
        to_dataframe(trace)
