"""
Penalty dual decomposition with alternating gradient projection (PDDAGP).

The outer loop updates the multiplier ``mu`` and shrinks the penalty
parameter ``rho``; the inner loop alternates one projected-gradient ascent
step on the covariances, one on the IRS phases, and a closed-form slack
update, until the augmented objective stalls.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .cxmat import herm_eig
from .errors import ConfigInvalid, NonPSD, NumericalBreakdown
from .gradients import grad_phi, grad_x
from .model import effective_channels
from .objective import DesignPoint, PenaltyState, evaluate, nats_to_bits
from .projections import project_covariances, project_phases

__all__ = ['SolverConfig', 'TraceRow', 'SolveReport', 'LineSearchResult',
           'line_search', 'update_tau', 'factor_precoders', 'solve',
           'fixed_step_iteration', 'TRACE_HEADER']

TRACE_HEADER = ['outer', 'inner', 'aug_obj_nats', 'wsr_nats', 'f', 'rho', 'mu', 'step_x', 'step_phi']

# feasibility tolerances applied to the final iterate
HARVEST_TOL = 1e-3
BUDGET_RTOL = 1e-6
UNIT_TOL = 1e-9
_TINY = 1e-12


@dataclass
class SolverConfig:
    mu0: float = 0.0
    rho0: float = 1.0
    kappa: float = 0.1
    eps: float = 1e-3
    step_x0: float = 1.0
    step_phi0: float = 1.0
    ls_shrink: float = 0.5
    ls_grow: float = 2.0
    ls_max: int = 30
    inner_max: int = 2000
    outer_max: int = 30
    # baselines keep the phases fixed and only optimize the covariances
    optimize_phi: bool = True
    # False drops the harvest constraint: zero penalty, objective = WSR
    enforce_harvest: bool = True

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ConfigInvalid("rho0 must be positive")
        if not 0 < self.kappa < 1:
            raise ConfigInvalid("kappa must lie in (0, 1)")
        if not self.eps > 0:
            raise ConfigInvalid("eps must be positive")
        if not 0 < self.ls_shrink < 1 or self.ls_grow < 1:
            raise ConfigInvalid("need 0 < ls_shrink < 1 and ls_grow >= 1")
        if self.inner_max < 1 or self.outer_max < 1 or self.ls_max < 0:
            raise ConfigInvalid("iteration caps must be >= 1")
        if not (self.step_x0 > 0 and self.step_phi0 > 0):
            raise ConfigInvalid("initial steps must be positive")

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigInvalid(f"unknown solver fields: {sorted(unknown)}")
        return cls(**data)


class TraceRow(NamedTuple):
    outer: int
    inner: int
    aug_obj_nats: float
    wsr_nats: float
    f: float
    rho: float
    mu: float
    step_x: float
    step_phi: float


def _complex_to_json(a):
    a = np.asarray(a)
    return {'real': a.real.tolist(), 'imag': a.imag.tolist()}


@dataclass
class SolveReport:
    final: DesignPoint
    feasible: bool
    converged: bool
    wsr_nats: float
    harvested_norm: float
    f: float
    mu: float
    rho: float
    outer_iterations: int
    inner_iterations: int
    trace: list = field(default_factory=list)
    wall_time: float = 0.0
    channel_hash: str = ''

    @property
    def wsr_bits(self):
        return float(nats_to_bits(self.wsr_nats))

    def to_dict(self):
        return {
            'feasible': bool(self.feasible),
            'converged': bool(self.converged),
            'wsr_nats': float(self.wsr_nats),
            'wsr_bits': self.wsr_bits,
            'harvested_norm': float(self.harvested_norm),
            'f': float(self.f),
            'mu': self.mu,
            'rho': self.rho,
            'outer_iterations': self.outer_iterations,
            'inner_iterations': self.inner_iterations,
            'wall_time': self.wall_time,
            'channel_hash': self.channel_hash,
            'final': {
                'x': _complex_to_json(self.final.x),
                'phi': _complex_to_json(self.final.phi),
                'tau': self.final.tau,
            },
            'trace': [row._asdict() for row in self.trace],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    def trace_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(TRACE_HEADER)
        for row in self.trace:
            writer.writerow([row.outer, row.inner] + [repr(float(v)) for v in row[2:]])
        return buf.getvalue()


class LineSearchResult(NamedTuple):
    step: float
    point: np.ndarray
    value: float


def line_search(objective, project, point, grad, value, step_try, shrink=0.5, max_halvings=30):
    """
    Monotone backtracking along a projected-gradient arc.

    Tries ``step_try * shrink**j`` for ``j = 0..max_halvings`` and accepts
    the first step whose projected point does not decrease ``objective``
    below ``value``. If none qualifies the step is 0 and ``point`` is
    returned unchanged.
    """
    step = step_try
    for _ in range(max_halvings + 1):
        candidate = project(point + step * grad)
        v = objective(candidate)
        if v >= value:
            return LineSearchResult(step, candidate, v)
        step *= shrink
    return LineSearchResult(0.0, point, value)


def update_tau(p_h, mu, rho):
    """Maximizer of the augmented objective over ``tau >= 0``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return max(0.0, p_h - 1.0 - mu * rho)


def factor_precoders(x):
    """Precoder ``F = U diag(sqrt(w))`` with ``F F^H = x`` for a PSD ``x``."""
    w, u = herm_eig(x)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    if w.size and np.min(w) < -1e-9 * scale:
        raise NonPSD(f"smallest eigenvalue {np.min(w):.3e}")
    return u * np.sqrt(np.maximum(w, 0.0))[..., None, :]


def _rel_change(new, old):
    return (new - old) / max(abs(old), _TINY)


def _is_feasible(d, ev, p_b, check_harvest=True):
    total = d.total_power
    unit = np.max(np.abs(np.abs(d.phi) - 1.0)) if d.phi.size else 0.0
    harvest_ok = ev.p_h >= 1.0 - HARVEST_TOL or not check_harvest
    return harvest_ok and total <= p_b * (1 + BUDGET_RTOL) and unit <= UNIT_TOL


def fixed_step_iteration(ch, d, pen, cfg, step_x, step_phi):
    """
    One inner iteration with fixed step sizes and no line search.

    Returns the new point and its evaluation. Used to time the
    per-iteration cost.
    """
    eff = effective_channels(ch, d.phi)
    x = project_covariances(d.x + step_x * grad_x(eff, d, pen, cfg), cfg.p_b)
    d1 = DesignPoint(x, d.phi, d.tau)
    phi = project_phases(d.phi + step_phi * grad_phi(eff, d1, pen, cfg))
    eff = effective_channels(ch, phi)
    d2 = DesignPoint(x, phi, d.tau)
    ev = evaluate(eff, d2, pen, cfg)
    d2.tau = update_tau(ev.p_h, pen.mu, pen.rho)
    return d2, evaluate(eff, d2, pen, cfg)


def solve(ch, cfg, scfg=None, phi0=None, callback: Optional[Callable] = None):
    """
    Run PDDAGP on one channel realization.

    Parameters
    ----------
    ch : ChannelSet
        Noise-normalized channels.
    cfg : ScenarioConfig
    scfg : SolverConfig, optional
    phi0 : array_like, optional
        Initial phases (default all ones).
    callback : callable, optional
        Called as ``callback(outer, inner, point)`` after every inner
        iteration.

    Returns
    -------
    SolveReport
        ``feasible`` is False when the outer loop hits ``outer_max``
        without converging, which is how infeasibility is detected.
    """
    if scfg is None:
        scfg = SolverConfig()
    if not ch.normalized:
        raise ConfigInvalid("channels must be noise-normalized")
    t0 = time.perf_counter()
    dims = ch.dims
    p_b = cfg.p_b
    d = DesignPoint.initial(dims['m_i'], dims['n_b'], dims['n_s'])
    if phi0 is not None:
        d.phi = project_phases(phi0)
    if scfg.enforce_harvest:
        pen = PenaltyState(scfg.mu0, scfg.rho0)
    else:
        pen = PenaltyState(0.0, math.inf)
    step_x, step_phi = scfg.step_x0, scfg.step_phi0
    trace = []
    converged = False
    total_inner = 0
    outer = 0

    eff = effective_channels(ch, d.phi)
    ev = evaluate(eff, d, pen, cfg)
    for outer in range(scfg.outer_max):
        trace.append(TraceRow(outer, 0, ev.aug, ev.wsr, ev.f, pen.rho, pen.mu, 0.0, 0.0))

        for inner in range(1, scfg.inner_max + 1):
            prev = ev.aug
            phi, tau = d.phi, d.tau

            gx = grad_x(eff, d, pen, cfg)
            ls = line_search(
                lambda x: evaluate(eff, DesignPoint(x, phi, tau), pen, cfg).aug,
                lambda v: project_covariances(v, p_b),
                d.x, gx, ev.aug, scfg.ls_grow * step_x, scfg.ls_shrink, scfg.ls_max)
            acc_x = ls.step
            if acc_x > 0:
                step_x = acc_x
            d = DesignPoint(ls.point, phi, tau)
            value = ls.value

            acc_phi = 0.0
            if scfg.optimize_phi and dims['n_s'] > 0:
                gp = grad_phi(eff, d, pen, cfg)
                x = d.x
                ls = line_search(
                    lambda p: evaluate(effective_channels(ch, p), DesignPoint(x, p, tau), pen, cfg).aug,
                    project_phases, d.phi, gp, value, scfg.ls_grow * step_phi,
                    scfg.ls_shrink, scfg.ls_max)
                acc_phi = ls.step
                if acc_phi > 0:
                    step_phi = acc_phi
                    d = DesignPoint(x, ls.point, tau)
                    eff = effective_channels(ch, d.phi)

            ev = evaluate(eff, d, pen, cfg)
            if scfg.enforce_harvest:
                trial = DesignPoint(d.x, d.phi, update_tau(ev.p_h, pen.mu, pen.rho))
                ev_tau = evaluate(eff, trial, pen, cfg)
                # the slack update is an exact maximizer; guard only against rounding
                if ev_tau.aug >= ev.aug:
                    d, ev = trial, ev_tau
            if not math.isfinite(ev.aug):
                raise NumericalBreakdown(f"augmented objective became {ev.aug}")

            total_inner += 1
            trace.append(TraceRow(outer, inner, ev.aug, ev.wsr, ev.f, pen.rho, pen.mu, acc_x, acc_phi))
            if callback is not None:
                callback(outer, inner, d)
            if _rel_change(ev.aug, prev) < scfg.eps:
                break

        gap = abs(ev.aug - ev.wsr) / max(abs(ev.aug), _TINY)
        if gap < scfg.eps and (abs(ev.f) <= scfg.eps or not scfg.enforce_harvest):
            converged = True
            break
        if outer + 1 == scfg.outer_max:
            break
        pen = PenaltyState(pen.mu + ev.f / pen.rho, scfg.rho0 * scfg.kappa ** (outer + 1))
        ev = evaluate(eff, d, pen, cfg)

    feasible = bool(converged and _is_feasible(d, ev, p_b, scfg.enforce_harvest))
    return SolveReport(
        final=d, feasible=feasible, converged=converged, wsr_nats=ev.wsr,
        harvested_norm=ev.p_h, f=ev.f, mu=pen.mu, rho=pen.rho,
        outer_iterations=outer + 1, inner_iterations=total_inner, trace=trace,
        wall_time=time.perf_counter() - t0, channel_hash=ch.fingerprint())
