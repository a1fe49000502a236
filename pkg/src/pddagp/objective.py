"""
Rates, harvested power and the augmented Lagrangian.

All rates are in nats. The harvest constraint is written as
``f = 1 + tau - P_H >= ...`` with ``P_H`` the weighted harvested power
divided by the (noise-normalized) threshold, so ``P_H >= 1`` is the
requirement and ``tau >= 0`` is its slack.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cxmat import herm, logdet_psd

__all__ = ['DesignPoint', 'PenaltyState', 'Evaluation', 'rates', 'rate_m',
           'wsr', 'harvested_power_norm', 'residual_f', 'aug_objective',
           'evaluate', 'nats_to_bits']


def nats_to_bits(value):
    return value / np.log(2.0)


@dataclass
class DesignPoint:
    """
    Optimization state.

    Attributes
    ----------
    x : ndarray, shape (m_i, n_b, n_b)
        Transmit covariance per information receiver.
    phi : ndarray, shape (n_s,)
        IRS reflection coefficients.
    tau : float
        Slack of the harvest constraint.
    """
    x: np.ndarray
    phi: np.ndarray
    tau: float = 0.0

    @classmethod
    def initial(cls, m_i, n_b, n_s):
        """All-zero covariances, all-ones phases, zero slack."""
        return cls(np.zeros((m_i, n_b, n_b), dtype=complex), np.ones(n_s, dtype=complex), 0.0)

    def copy(self):
        return DesignPoint(self.x.copy(), self.phi.copy(), float(self.tau))

    @property
    def total(self):
        """Sum of all covariances."""
        return self.x.sum(axis=0)

    @property
    def total_power(self):
        return float(np.real(np.trace(self.total)))


@dataclass
class PenaltyState:
    mu: float = 0.0
    rho: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")


class Evaluation(NamedTuple):
    aug: float
    wsr: float
    p_h: float
    f: float


def rates(eff, d):
    """Per-IR rates ``ln|A_m| - ln|B_m|`` for every m at once."""
    z = eff.z
    sigma = d.x.sum(axis=0)
    sigma_m = sigma[None] - d.x
    eye = np.eye(z.shape[1])
    a = eye + z @ sigma @ herm(z)
    b = eye + z @ sigma_m @ herm(z)
    return logdet_psd(a) - logdet_psd(b)


def rate_m(eff, d, m):
    return float(rates(eff, d)[m])


def wsr(eff, d, omega):
    return float(np.dot(omega, rates(eff, d)))


def harvested_power_norm(eff, d, cfg):
    r"""
    Weighted harvested power over the threshold,
    :math:`(\eta / \tilde P_{th}) \sum_\ell \alpha_\ell \mathrm{tr}(\Xi_\ell \Sigma \Xi_\ell^H)`.
    """
    xi = eff.xi
    sigma = d.x.sum(axis=0)
    per_er = np.real(np.sum((xi @ sigma) * xi.conj(), axis=(1, 2)))
    return float(cfg.eta / cfg.p_th_norm * np.dot(cfg.alpha, per_er))


def residual_f(eff, d, cfg):
    return 1.0 + d.tau - harvested_power_norm(eff, d, cfg)


def _penalized(rate_sum, f, pen):
    return rate_sum - (pen.mu * f + 0.5 / pen.rho * f * f)


def aug_objective(eff, d, pen, cfg):
    return evaluate(eff, d, pen, cfg).aug


def evaluate(eff, d, pen, cfg):
    """Augmented objective together with its parts, from one pass."""
    rate_sum = wsr(eff, d, cfg.omega)
    p_h = harvested_power_norm(eff, d, cfg)
    f = 1.0 + d.tau - p_h
    return Evaluation(_penalized(rate_sum, f, pen), rate_sum, p_h, f)
