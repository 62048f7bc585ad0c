# encoding:utf-8
"""
powercomp command line

    powercomp list
    powercomp show NAME [--set key=value ...]
    powercomp run NAME [--set key=value ...] [--seed S] [--out DIR]
    powercomp run --config scenario.json
    powercomp sweep NAME --grid key=v1,v2 [--grid ...] [--workers K]
    powercomp check

exit codes: 0 success, 1 configuration error, 2 a run was truncated
"""
import argparse
import concurrent.futures
import itertools
import logging
import math
import os
import sys

import numpy as np

from . import __version__, compensator, lti, metrics, scenarios, simkernel
from .detector import DetectorConfig, ExtremumEvent, ExtremumKind, detector_init
from .exceptions import ConfigError, SerializerError
from .serializers import JsonSerializer, MsgPackSerializer
from .trace.pandas import write_events_csv, write_trace_csv
from .utils import atomic_write, parse_override, parse_value

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_TRUNCATED = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
CHECK_SEED = 20240607


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powercomp",
                                     description="event triggered power based oscillation compensation")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    commands.add_parser("list", help="list the built-in scenarios")

    show = commands.add_parser("show", help="print a resolved scenario as json")
    show.add_argument("name")
    _add_scenario_options(show)

    run = commands.add_parser("run", help="simulate one scenario")
    run.add_argument("name", nargs="?", help="built-in scenario name")
    run.add_argument("--config", help="scenario json file, replaces NAME")
    _add_scenario_options(run)
    run.add_argument("--out", default=".", help="output directory (default: .)")

    sweep = commands.add_parser("sweep", help="run a parameter grid in a process pool")
    sweep.add_argument("name")
    sweep.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                       help="values of one override key, repeatable")
    _add_scenario_options(sweep)
    sweep.add_argument("--out", default=".", help="output directory (default: .)")
    sweep.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    commands.add_parser("check", help="run the built-in verification suite")
    return parser


def _add_scenario_options(parser):
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a builder parameter or a dotted config path, repeatable")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--duration", type=float)
    parser.add_argument("--fs", type=float, help="sampling rate of the simulation and the detector")
    parser.add_argument("--no-compensator", action="store_true")


def _overrides(args):
    return [parse_override(item) for item in args.set]


def _run_options(args):
    return {"duration": args.duration, "fs": args.fs, "seed": args.seed,
            "no_compensator": args.no_compensator}


def load_scenario_file(path, overrides=(), **options) -> scenarios.ScenarioConfig:
    """
    read a scenario json file, every override is a dotted path
    """
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError("can't read scenario file %s: %s" % (path, exc))
    data = JsonSerializer().loads(text)
    if not isinstance(data, dict):
        raise ConfigError("scenario file %s must hold a json object" % path)
    scenarios.apply_overrides(data, overrides, **options)
    return scenarios.ScenarioConfig.from_dict(data)


def execute(scenario, out_dir, metadata=None):
    """
    simulate, analyze and write the four output files atomically
    :return: (SimTrace, MetricsReport)
    """
    trace = simkernel.run(scenario, metadata=metadata)
    report = metrics.analyze(trace, None, scenario.sim.fs)
    prefix = os.path.join(out_dir, scenario.name)
    serializer = JsonSerializer()
    write_trace_csv(trace, prefix + ".trace.csv")
    write_events_csv(trace, prefix + ".events.csv")
    atomic_write(prefix + ".metrics.json", serializer.dumps(report.to_dict()))
    atomic_write(prefix + ".scenario.json", serializer.dumps(trace.metadata))
    return trace, report


def cmd_list(args=None) -> int:
    for name in scenarios.SCENARIOS:
        print("%-16s %s" % (name, scenarios.describe(name)))
    return EXIT_OK


def cmd_show(args) -> int:
    scenario = scenarios.resolve(args.name, _overrides(args), **_run_options(args))
    sys.stdout.write(JsonSerializer().dumps(scenario.to_dict()))
    return EXIT_OK


def cmd_run(args) -> int:
    overrides = _overrides(args)
    options = _run_options(args)
    if args.config and args.name:
        raise ConfigError("give either a scenario name or --config, not both")
    if args.config:
        scenario = load_scenario_file(args.config, overrides, **options)
    elif args.name:
        scenario = scenarios.resolve(args.name, overrides, **options)
    else:
        raise ConfigError("a scenario name or --config is required")

    metadata = {"overrides": dict(overrides), "options": options}
    trace, report = execute(scenario, args.out, metadata)
    print("%s: %d samples, %d events, settling %s, %s"
          % (scenario.name, trace.length(), len(trace.events), report.settling_time_s,
             "truncated (%s)" % trace.failure if trace.truncated else "complete"))
    return EXIT_TRUNCATED if trace.truncated else EXIT_OK


def parse_grid(items):
    """
    ["a=1,-1", "l_weight=1,2"] -> [("a", [1, -1]), ("l_weight", [1, 2])]
    """
    grid = []
    for item in items:
        key, sep, values = item.partition("=")
        if not sep or not key.strip() or not values.strip():
            raise ConfigError("grid must look like key=v1,v2: %r" % item)
        grid.append((key.strip(), [parse_value(value.strip()) for value in values.split(",")]))
    return grid


def grid_points(grid):
    keys = [key for key, _ in grid]
    for values in itertools.product(*[values for _, values in grid]):
        yield list(zip(keys, values))


def point_directory(point) -> str:
    if not point:
        return "base"
    return "_".join("%s=%s" % (key, value) for key, value in point).replace(os.sep, "-")


def _sweep_worker(payload: bytes) -> bytes:
    serializer = MsgPackSerializer()
    job = serializer.loads(payload)
    overrides = [tuple(item) for item in job["overrides"]]
    scenario = scenarios.resolve(job["name"], overrides, **job["options"])
    trace, report = execute(scenario, job["out"], {"overrides": dict(overrides), "options": job["options"]})
    return serializer.dumps({"out": job["out"], "truncated": trace.truncated,
                             "failure": trace.failure, "metrics": report.to_dict()})


def cmd_sweep(args) -> int:
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1, got %d" % args.workers)
    base = _overrides(args)
    options = _run_options(args)
    grid = parse_grid(args.grid)
    jobs = []
    for point in grid_points(grid):
        overrides = base + point
        # fail fast on bad keys before any worker starts
        scenarios.resolve(args.name, overrides, **options)
        jobs.append({"name": args.name, "overrides": [list(item) for item in overrides],
                     "options": options, "out": os.path.join(args.out, point_directory(point))})

    serializer = MsgPackSerializer()
    payloads = [serializer.dumps(job) for job in jobs]
    if args.workers == 1:
        results = [_sweep_worker(payload) for payload in payloads]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sweep_worker, payloads))

    truncated = False
    for raw in results:
        result = serializer.loads(raw)
        truncated = truncated or result["truncated"]
        logger.info("sweep point %s finished", result["out"])
        print("%s: updates/period %s, settling %s%s"
              % (result["out"], result["metrics"]["updates_per_period"],
                 result["metrics"]["settling_time_s"],
                 ", truncated" if result["truncated"] else ""))
    return EXIT_TRUNCATED if truncated else EXIT_OK


def check_energy_balance(samples=100):
    """
    worst relative energy residual of u = K w^2 A over random (A, w)
    """
    rng = np.random.default_rng(CHECK_SEED)
    k = compensator.optimal_gain()
    worst = 0.0
    for _ in range(samples):
        amp = rng.uniform(0.01, 10.0)
        omega = rng.uniform(0.5, 100.0)
        residual = compensator.energy_balance_residual(amp, omega, k * omega ** 2 * amp, panels=2000)
        worst = max(worst, abs(residual) / (math.pi * amp ** 2 * omega))
    return worst <= 1e-9, worst


def check_gain_constant():
    residual = abs(compensator.optimal_gain() - math.sqrt(3.0) / (2.0 * math.pi))
    return residual <= 1e-15, residual


def check_detector_sinusoid():
    """
    unit sinusoid at 10 rad/s, fs 1 kHz, N 30: frequency and amplitude errors after event 3
    """
    config = DetectorConfig(window_n=30, fs=1000.0, omega_max=30.0)
    samples = np.sin(10.0 * np.arange(10001) / config.fs)
    state = detector_init(config, samples[0])
    events = [event for event in (state.step(value, n) for n, value in enumerate(samples[1:], 1))
              if event is not None]
    if len(events) < 4:
        return False, float("inf")
    frequency = max(abs(event.omega_est - 10.0) / 10.0 for event in events[3:])
    amplitude = max(abs(abs(event.amp_signed) - 1.0) for event in events[3:])
    return frequency <= 0.02 and amplitude <= 0.01, max(frequency, amplitude)


def check_frequency_response(points=100):
    """
    resolvent against polynomial evaluation of the case-study plant
    """
    model = scenarios.case_study_plant().model()
    tf = model.to_transfer_function()
    worst = 0.0
    for omega in np.logspace(-1, 3, points):
        direct = lti.ss_freq_response(model, omega)
        worst = max(worst, abs(direct - tf(omega)) / abs(direct))
    return worst <= 1e-8, worst


def check_unity_delay():
    omega = 10.0
    event = ExtremumEvent(index=1, kind=ExtremumKind.MAXIMUM, t_star=0.0, amp_signed=1.0, omega_est=omega)
    config = compensator.CompensatorConfig(mode=compensator.CompensatorMode.HIGHER_ORDER,
                                           l_weight=1.0, forward_gain=lti.unity)
    apply_at, _ = compensator.higher_order_transform(1.0, event, config)
    residual = abs(apply_at - 2.0 * math.pi / omega)
    return residual <= 1e-12, residual


CHECKS = [
    ("energy-balance", check_energy_balance),
    ("gain-constant", check_gain_constant),
    ("detector-sinusoid", check_detector_sinusoid),
    ("frequency-response", check_frequency_response),
    ("unity-delay", check_unity_delay),
]


def cmd_check(args=None) -> int:
    failed = 0
    for name, check in CHECKS:
        passed, residual = check()
        failed += not passed
        print("%-20s %s residual=%.3e" % (name, "PASS" if passed else "FAIL", residual))
    return EXIT_OK if not failed else EXIT_CONFIG


COMMANDS = {
    "list": cmd_list,
    "show": cmd_show,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "check": cmd_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, SerializerError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
