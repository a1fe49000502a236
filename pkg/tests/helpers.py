"""Small random instances shared by several test modules."""

import numpy as np

from pddagp.model import ChannelSet, ScenarioConfig
from pddagp.objective import DesignPoint, PenaltyState
from pddagp.projections import project_covariances
from conftest import cn


def instance(rng, n_b=3, n_i=2, n_e=2, n_s=4, m_i=2, m_e=2, zero_power=False, alpha=None):
    ch = ChannelSet(cn(rng, n_s, n_b), cn(rng, m_i, n_i, n_b), cn(rng, m_e, n_e, n_b),
                    cn(rng, m_i, n_i, n_s), cn(rng, m_e, n_e, n_s), normalized=True)
    cfg = ScenarioConfig(n_b=n_b, n_i=n_i, n_e=n_e, n_s=n_s, m_i=m_i, m_e=m_e,
                         omega=list(rng.uniform(0.5, 2, m_i)),
                         alpha=list(rng.uniform(0.5, 2, m_e)) if alpha is None else alpha)
    # threshold of the order of the harvested power at unit-scale channels
    cfg.p_th_mw = 1e3 * cfg.noise_power * 2.0
    if zero_power:
        x = np.zeros((m_i, n_b, n_b), dtype=complex)
    else:
        f = cn(rng, m_i, n_b, n_b)
        x = project_covariances(f @ np.conj(np.swapaxes(f, -1, -2)), cfg.p_b)
    d = DesignPoint(x, np.exp(2j * np.pi * rng.random(n_s)), float(rng.uniform(0, 1)))
    pen = PenaltyState(float(rng.normal()), float(rng.uniform(0.2, 5)))
    return ch, cfg, d, pen
