"""
Monte Carlo experiments around the solver: parameter sweeps, baselines,
a finite-difference gradient check and a per-iteration timing scan.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConfigInvalid, InsufficientPoints
from .gradients import fd_oracle, grad_phi, grad_x
from .model import ChannelSet, ScenarioConfig, effective_channels, generate_channels
from .objective import DesignPoint, PenaltyState, aug_objective, nats_to_bits
from .projections import project_covariances
from .solver import SolverConfig, fixed_step_iteration, solve

__all__ = ['AXES', 'BASELINES', 'SWEEP_HEADER', 'SweepSpec', 'SweepRow', 'TrialRecord',
           'trial_config', 'run_trial', 'run_sweep', 'sweep_csv', 'run_baseline',
           'GradCheckReport', 'check_gradients', 'TimingReport', 'timing_scan']

AXES = ('n_s', 'p_th_mw', 'er_center_x', 'p_b_dbm')
BASELINES = ('random_phase', 'no_irs')
SWEEP_HEADER = ['axis_value', 'mean_wsr_bits', 'std_wsr_bits', 'feas_rate', 'mean_ms',
                'base_random_phase_bits', 'base_no_irs_bits']

# spawn-key tags separating the two random streams of a trial
_CHANNEL_STREAM = 0
_PHASE_STREAM = 1


@dataclass
class SweepSpec:
    """
    One-dimensional sweep.

    ``timing`` controls the ``mean_ms`` column. Wall times differ from run
    to run, so it is off by default and the column reads ``nan``; this
    keeps the CSV byte-identical for a fixed spec.
    """
    axis: str
    values: list
    trials: int = 100
    base: ScenarioConfig = field(default_factory=ScenarioConfig)
    seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    baselines: tuple = BASELINES
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if isinstance(self.base, dict):
            self.base = ScenarioConfig.from_dict(self.base)
        if isinstance(self.solver, dict):
            self.solver = SolverConfig.from_dict(self.solver)
        self.values = list(self.values)
        self.baselines = tuple(self.baselines)
        self.validate()

    def validate(self):
        if self.axis not in AXES:
            raise ConfigInvalid(f"axis must be one of {AXES}, got {self.axis!r}")
        if not self.values:
            raise ConfigInvalid("values must be non-empty")
        if self.trials < 1:
            raise ConfigInvalid("trials must be >= 1")
        if self.workers < 1:
            raise ConfigInvalid("workers must be >= 1")
        bad = set(self.baselines) - set(BASELINES)
        if bad:
            raise ConfigInvalid(f"unknown baselines: {sorted(bad)}")
        if self.seed < 0:
            raise ConfigInvalid("seed must be non-negative")
        # surfaces every bad axis value before any solve starts
        for v in self.values:
            self._config_for(v, 0)

    def _config_for(self, value, seed):
        if self.axis == 'n_s':
            if int(value) != value:
                raise ConfigInvalid(f"n_s must be an integer, got {value!r}")
            value = int(value)
        try:
            return self.base.replace(**{self.axis: value, 'seed': seed})
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(str(exc)) from exc

    def to_dict(self):
        return {
            'axis': self.axis, 'values': list(self.values), 'trials': self.trials,
            'base': self.base.to_dict(), 'seed': self.seed, 'solver': self.solver.to_dict(),
            'baselines': list(self.baselines), 'workers': self.workers, 'timing': self.timing,
        }

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigInvalid(f"unknown sweep fields: {sorted(unknown)}")
        if 'axis' not in data or 'values' not in data:
            raise ConfigInvalid("sweep spec needs 'axis' and 'values'")
        return cls(**data)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


class TrialRecord(NamedTuple):
    trial: int
    value: object
    channel_hash: str
    feasible: bool
    wsr_bits: float
    wall_time: float
    baselines: dict
    baseline_hashes: dict


class SweepRow(NamedTuple):
    axis_value: object
    mean_wsr_bits: float
    std_wsr_bits: float
    feas_rate: float
    mean_ms: float
    base_random_phase_bits: float
    base_no_irs_bits: float
    records: tuple = ()


def _child_seed(master, trial, stream):
    ss = np.random.SeedSequence(entropy=master, spawn_key=(trial, stream))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def trial_config(spec, value, trial):
    """
    Scenario of one trial.

    The seed depends on the master seed and trial index only, so every
    axis value reuses the same placements and fading draws where shapes
    allow (common random numbers).
    """
    return spec._config_for(value, _child_seed(spec.seed, trial, _CHANNEL_STREAM))


def run_baseline(ch, cfg, which, scfg=None, rng=None):
    """
    Covariance-only solve on the same channels.

    ``random_phase`` draws phases uniformly on the torus (from ``rng``) and
    keeps them fixed; ``no_irs`` removes the reflected paths. The returned
    report carries the hash of ``ch`` as passed in.
    """
    if which not in BASELINES:
        raise ConfigInvalid(f"unknown baseline {which!r}")
    scfg = dataclasses.replace(scfg or SolverConfig(), optimize_phi=False)
    n_s = ch.dims['n_s']
    if which == 'random_phase':
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        phi = np.exp(2j * np.pi * rng.random(n_s))
        report = solve(ch, cfg, scfg, phi0=phi)
    else:
        report = solve(ch.without_irs(), cfg, scfg)
    report.channel_hash = ch.fingerprint()
    return report


def run_trial(spec, value, trial):
    cfg = trial_config(spec, value, trial)
    ch = generate_channels(cfg)
    rep = solve(ch, cfg, spec.solver)
    base, hashes = {}, {}
    for which in spec.baselines:
        rng = np.random.default_rng(_child_seed(spec.seed, trial, _PHASE_STREAM))
        b = run_baseline(ch, cfg, which, spec.solver, rng=rng)
        base[which] = nats_to_bits(b.wsr_nats) if b.feasible else math.nan
        hashes[which] = b.channel_hash
    return TrialRecord(trial, value, rep.channel_hash, rep.feasible, nats_to_bits(rep.wsr_nats),
                       rep.wall_time, base, hashes)


def _run_job(args):
    spec, value, trial = args
    return run_trial(spec, value, trial)


def _nanmean(values):
    values = [v for v in values if not math.isnan(v)]
    return float(np.mean(values)) if values else math.nan


def _aggregate(spec, value, records):
    records = tuple(sorted(records, key=lambda r: r.trial))
    wsr = [r.wsr_bits for r in records if r.feasible]
    mean = float(np.mean(wsr)) if wsr else math.nan
    std = float(np.std(wsr)) if wsr else math.nan
    feas = len(wsr) / len(records)
    ms = float(np.mean([r.wall_time for r in records])) * 1e3 if spec.timing else math.nan
    base = {w: _nanmean([r.baselines.get(w, math.nan) for r in records]) for w in BASELINES}
    return SweepRow(value, mean, std, feas, ms, base['random_phase'], base['no_irs'], records)


def run_sweep(spec):
    """
    Solve every (axis value, trial) pair with PDDAGP and the enabled
    baselines on identical channels.

    Infeasible trials are left out of the WSR means and counted in the
    feasibility rate. Baseline means are taken over the trials where the
    baseline itself is feasible.
    """
    spec.validate()
    jobs = [(spec, v, t) for v in spec.values for t in range(spec.trials)]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * spec.workers))))
    else:
        results = [_run_job(j) for j in jobs]
    rows = []
    for i, v in enumerate(spec.values):
        chunk = results[i * spec.trials:(i + 1) * spec.trials]
        rows.append(_aggregate(spec, v, chunk))
    return rows


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


def sweep_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator='\n')
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([_fmt(x) for x in r[:7]])
    return buf.getvalue()


# gradient check -----------------------------------------------------------

@dataclass
class GradCheckReport:
    cases: int
    max_rel_x: float
    max_rel_phi: float
    failures: list
    tol: float
    atol: float

    @property
    def passed(self):
        return not self.failures

    def summary(self):
        status = 'PASS' if self.passed else 'FAIL'
        return (f"{status}: {self.cases} cases, max rel err X={self.max_rel_x:.3e}, "
                f"phi={self.max_rel_phi:.3e} (tol {self.tol:g}, atol {self.atol:g})")


def _cn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _random_instance(rng, dims, zero_power=False):
    n_b, n_i, n_e, n_s, m_i, m_e = (dims[k] for k in ('n_b', 'n_i', 'n_e', 'n_s', 'm_i', 'm_e'))
    ch = ChannelSet(_cn(rng, n_s, n_b), _cn(rng, m_i, n_i, n_b), _cn(rng, m_e, n_e, n_b),
                    _cn(rng, m_i, n_i, n_s), _cn(rng, m_e, n_e, n_s), normalized=True)
    # unit-scale instance: P_th chosen so the normalized threshold is 1
    cfg = ScenarioConfig(n_b=n_b, n_i=n_i, n_e=n_e, n_s=n_s, m_i=m_i, m_e=m_e,
                         omega=list(rng.uniform(0.5, 2.0, m_i)), alpha=list(rng.uniform(0.5, 2.0, m_e)),
                         eta=0.5, p_b_dbm=30.0)
    cfg.p_th_mw = 1e3 * cfg.noise_power * float(rng.uniform(0.5, 4.0))
    if zero_power:
        x = np.zeros((m_i, n_b, n_b), dtype=complex)
    else:
        f = _cn(rng, m_i, n_b, n_b)
        x = project_covariances(f @ np.conj(np.swapaxes(f, -1, -2)), cfg.p_b)
    d = DesignPoint(x, np.exp(2j * np.pi * rng.random(n_s)), float(rng.uniform(0, 1)))
    pen = PenaltyState(float(rng.normal()), float(rng.uniform(0.2, 5.0)))
    return ch, cfg, d, pen


def _rel(fd, an, atol):
    err = abs(fd - an)
    return err / abs(fd) if abs(fd) > atol else err


def check_gradients(dims=None, seed=0, cases=50, tol=1e-5, atol=1e-9, step=1e-6):
    """
    Compare the closed-form gradients with central differences.

    Each case draws CN(0, 1) channels, a random feasible point and random
    penalty parameters; every fifth case sits at zero transmit power. One
    random Hermitian direction per covariance block and one complex
    direction for the phases are tested, unprojected. A case passes when
    ``|fd - an| <= tol * |fd| + atol``.
    """
    dims = dict(dict(n_b=3, n_i=2, n_e=2, n_s=4, m_i=2, m_e=2), **(dims or {}))
    if cases < 1:
        raise ConfigInvalid("cases must be >= 1")
    rng = np.random.default_rng(seed)
    max_x = max_phi = 0.0
    failures = []
    for c in range(cases):
        ch, cfg, d, pen = _random_instance(rng, dims, zero_power=(c % 5 == 4))
        eff = effective_channels(ch, d.phi)
        gx = grad_x(eff, d, pen, cfg)
        gp = grad_phi(eff, d, pen, cfg)

        for m in range(dims['m_i']):
            e = _cn(rng, dims['n_b'], dims['n_b'])
            e = e + e.conj().T
            dx = np.zeros_like(d.x)
            dx[m] = e

            def fx(x):
                return aug_objective(eff, DesignPoint(x, d.phi, d.tau), pen, cfg)
            fd = fd_oracle(fx, d.x, dx, step)
            an = float(np.real(np.vdot(gx[m], e)))
            r = _rel(fd, an, atol)
            max_x = max(max_x, r)
            if abs(fd - an) > tol * abs(fd) + atol:
                failures.append((c, f'x[{m}]', fd, an))

        if dims['n_s'] > 0:
            dp = _cn(rng, dims['n_s'])

            def fp(p):
                return aug_objective(effective_channels(ch, p, check_unit=False),
                                     DesignPoint(d.x, p, d.tau), pen, cfg)
            fd = fd_oracle(fp, d.phi, dp, step)
            an = 2.0 * float(np.real(np.vdot(gp, dp)))
            r = _rel(fd, an, atol)
            max_phi = max(max_phi, r)
            if abs(fd - an) > tol * abs(fd) + atol:
                failures.append((c, 'phi', fd, an))
    return GradCheckReport(cases, max_x, max_phi, failures, tol, atol)


# timing ---------------------------------------------------------------------

@dataclass
class TimingReport:
    n_s: list
    seconds: list
    exponent: float

    def ratios(self):
        return [b / a for a, b in zip(self.seconds, self.seconds[1:])]

    def summary(self):
        lines = [f"n_s={n}: {s * 1e3:.4f} ms/iter" for n, s in zip(self.n_s, self.seconds)]
        lines.append(f"fitted exponent b = {self.exponent:.3f}")
        return '\n'.join(lines)


def timing_scan(ns_values, base=None, iterations=50, repeats=5, seed=0):
    """
    Per-inner-iteration wall time for each IRS size.

    One fixed-step inner iteration (both gradient steps, both projections,
    slack update, evaluation) is timed ``iterations`` times in a row; the
    best of ``repeats`` such blocks is kept to suppress scheduler noise.
    The exponent is the least-squares slope of log time on log ``n_s``.
    """
    ns_values = [int(n) for n in ns_values]
    if len(ns_values) < 3 or len(set(ns_values)) < 3:
        raise InsufficientPoints("need at least 3 distinct n_s values")
    if min(ns_values) < 1:
        raise ConfigInvalid("n_s values must be positive")
    if max(ns_values) < 4 * min(ns_values):
        raise InsufficientPoints("n_s values must span at least a factor of 4")
    base = base or ScenarioConfig()
    pen = PenaltyState(0.0, 1.0)
    seconds = []
    for n in ns_values:
        cfg = base.replace(n_s=n, seed=seed)
        ch = generate_channels(cfg)
        rng = np.random.default_rng(seed)
        x0 = np.stack([np.eye(cfg.n_b, dtype=complex) * cfg.p_b / (cfg.n_b * cfg.m_i)] * cfg.m_i)
        d0 = DesignPoint(x0, np.exp(2j * np.pi * rng.random(n)), 0.0)
        fixed_step_iteration(ch, d0, pen, cfg, 1e-6, 1e-6)  # warm-up
        best = math.inf
        for _ in range(repeats):
            d = d0
            t = time.perf_counter()
            for _ in range(iterations):
                d, _ev = fixed_step_iteration(ch, d, pen, cfg, 1e-6, 1e-6)
            best = min(best, (time.perf_counter() - t) / iterations)
        seconds.append(best)
    b = float(np.polyfit(np.log(ns_values), np.log(seconds), 1)[0])
    return TimingReport(ns_values, seconds, b)
