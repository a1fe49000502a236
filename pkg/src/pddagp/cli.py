"""
Command-line entry point.

Exit codes: 0 success, 1 a check ran and failed, 2 bad configuration or
input, 3 numerical breakdown.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .errors import ConfigInvalid, InsufficientPoints, NumericalBreakdown, PddagpError
from .harness import SweepSpec, check_gradients, run_sweep, sweep_csv, timing_scan
from .model import ScenarioConfig, generate_channels
from .solver import SolverConfig, solve

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

_SUMMARY_FIELDS = ['feasible', 'converged', 'wsr_nats', 'wsr_bits', 'harvested_norm', 'f', 'mu',
                   'rho', 'outer_iterations', 'inner_iterations', 'wall_time', 'channel_hash']


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigInvalid(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path} is not valid JSON: {exc}") from exc


def _load_scenario(path):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigInvalid("scenario must be a JSON object")
    try:
        return ScenarioConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from exc


def _load_solver(path):
    if path is None:
        return SolverConfig()
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigInvalid("solver config must be a JSON object")
    try:
        return SolverConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from exc


def _write(out, text):
    if out is None or out == '-':
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _summary_csv(report):
    d = report.to_dict()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(_SUMMARY_FIELDS)
    w.writerow([repr(d[k]) if isinstance(d[k], float) else d[k] for k in _SUMMARY_FIELDS])
    return buf.getvalue()


def cmd_solve(args):
    cfg = _load_scenario(args.scenario)
    report = solve(generate_channels(cfg), cfg, _load_solver(args.solver))
    if args.out and args.out.endswith('.csv'):
        _write(args.out, _summary_csv(report))
    else:
        _write(args.out, report.to_json(indent=2) + '\n')
    return EXIT_OK


def cmd_trace(args):
    cfg = _load_scenario(args.scenario)
    report = solve(generate_channels(cfg), cfg, _load_solver(args.solver))
    _write(args.out, report.trace_csv())
    return EXIT_OK


def cmd_sweep(args):
    data = _load_json(args.spec)
    if not isinstance(data, dict):
        raise ConfigInvalid("sweep spec must be a JSON object")
    try:
        spec = SweepSpec.from_dict(data)
    except TypeError as exc:
        raise ConfigInvalid(str(exc)) from exc
    if args.workers is not None:
        spec.workers = args.workers
        spec.validate()
    _write(args.out, sweep_csv(run_sweep(spec)))
    return EXIT_OK


def cmd_check_grad(args):
    report = check_gradients(seed=args.seed, cases=args.cases)
    print(report.summary())
    for case, block, fd, an in report.failures:
        print(f"  case {case} {block}: fd={fd:.9e} analytic={an:.9e}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _int_list(text):
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError as exc:
        raise ConfigInvalid(f"bad integer list {text!r}") from exc


def cmd_timing(args):
    base = _load_scenario(args.scenario) if args.scenario else None
    report = timing_scan(_int_list(args.ns), base=base, iterations=args.iterations)
    print(report.summary())
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog='pddagp', description=(
        "Weighted-sum-rate maximization for IRS-assisted SWIPT MIMO broadcast"))
    sub = p.add_subparsers(dest='command', required=True)

    s = sub.add_parser('solve', help='solve one scenario')
    s.add_argument('--scenario', required=True, help='scenario JSON')
    s.add_argument('--solver', help='solver settings JSON')
    s.add_argument('--out', help='output file (.json or .csv); stdout if omitted')
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser('sweep', help='Monte Carlo sweep along one axis')
    s.add_argument('--spec', required=True, help='sweep spec JSON')
    s.add_argument('--out', help='output CSV; stdout if omitted')
    s.add_argument('--workers', type=int, help='override the worker count')
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser('check-grad', help='finite-difference gradient check')
    s.add_argument('--cases', type=int, default=50)
    s.add_argument('--seed', type=int, default=0)
    s.set_defaults(func=cmd_check_grad)

    s = sub.add_parser('timing', help='per-iteration time against the IRS size')
    s.add_argument('--ns', default='100,200,400', help='comma-separated IRS sizes')
    s.add_argument('--scenario', help='scenario JSON for the other dimensions')
    s.add_argument('--iterations', type=int, default=50)
    s.set_defaults(func=cmd_timing)

    s = sub.add_parser('trace', help='convergence trace of one solve as CSV')
    s.add_argument('--scenario', required=True)
    s.add_argument('--solver')
    s.add_argument('--out')
    s.set_defaults(func=cmd_trace)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalBreakdown as exc:
        print(f"numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigInvalid, InsufficientPoints, PddagpError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == '__main__':
    sys.exit(main())
