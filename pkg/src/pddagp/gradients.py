"""
Closed-form gradients of the augmented objective.

Gradients are taken with respect to the conjugate variables. For a real
function ``F`` this means:

* along a Hermitian perturbation ``D`` of a covariance block the
  directional derivative is ``Re tr(G^H D)``;
* along a complex perturbation ``d`` of the phase vector it is
  ``2 Re(g^H d)``.

Ascent steps use the gradients as returned.
"""

import numpy as np

from .cxmat import herm, hermitianize, inv_sqrt_psd
from .objective import residual_f

__all__ = ['grad_x', 'grad_phi', 'fd_oracle', 'penalty_weight', 'grad_x_wsr', 'harvest_gram']


def penalty_weight(eff, d, pen, cfg):
    """Scalar ``mu + f / rho`` multiplying the harvested-power gradients."""
    return pen.mu + residual_f(eff, d, cfg) / pen.rho


def _sandwich(b, z, x):
    """``B^{-1/2} C^{-1} B^{-1/2}`` with ``C = I + B^{-1/2} Z X Z^H B^{-1/2}``."""
    s = inv_sqrt_psd(b)
    c = np.eye(b.shape[-1]) + s @ z @ x @ herm(z) @ s
    return s @ np.linalg.inv(c) @ s


def harvest_gram(xi, alpha):
    """``sum_l alpha_l Xi_l^H Xi_l``."""
    n_b = xi.shape[-1]
    flat = xi.reshape(-1, n_b)
    weighted = (np.asarray(alpha, dtype=float)[:, None, None] * xi).reshape(-1, n_b)
    return herm(flat) @ weighted


def grad_x_wsr(z, x, omega):
    """
    Gradient of the weighted sum rate with respect to every covariance.

    The own-rate term of block m uses ``B_m``; the term from the rate of
    another IR k uses that receiver's interference matrices with ``X_m``
    taken out (``B_bar``) and with both ``X_m`` and ``X_k`` taken out
    (``B_hat``). All sandwiches are evaluated as one batch.
    """
    m_i = x.shape[0]
    omega = np.asarray(omega, dtype=float)
    eye = np.eye(z.shape[1])
    sigma = x.sum(axis=0)
    sigma_m = sigma[None] - x
    b = eye + z @ sigma_m @ herm(z)
    out = omega[:, None, None] * (herm(z) @ _sandwich(b, z, x) @ z)
    if m_i > 1:
        ms, ks = np.nonzero(~np.eye(m_i, dtype=bool))
        zk = z[ks]
        b_bar = eye + zk @ sigma_m[ms] @ herm(zk)
        b_hat = eye + zk @ (sigma_m[ms] - x[ks]) @ herm(zk)
        inner = _sandwich(b_bar, zk, x[ms]) - _sandwich(b_hat, zk, x[ms])
        np.add.at(out, ms, omega[ks, None, None] * (herm(zk) @ inner @ zk))
    return out


def grad_x(eff, d, pen, cfg):
    """
    Gradient of the augmented objective with respect to every covariance.

    Returns
    -------
    ndarray, shape (m_i, n_b, n_b)
        Hermitian blocks.
    """
    xi = eff.xi
    grad_ph = cfg.eta / cfg.p_th_norm * harvest_gram(xi, cfg.alpha)
    weight = penalty_weight(eff, d, pen, cfg)
    return hermitianize(grad_x_wsr(eff.z, d.x, cfg.omega) + weight * grad_ph)


def grad_phi(eff, d, pen, cfg):
    """
    Gradient of the augmented objective with respect to the phase vector.

    ``vecd(G^H D H_S^H)`` is evaluated row-wise as
    ``sum_i conj(G[i, n]) (D H_S^H)[i, n]``, which keeps the cost linear in
    the number of IRS elements.
    """
    z, xi, ch = eff.z, eff.xi, eff.channels
    sigma = d.x.sum(axis=0)
    sigma_m = sigma[None] - d.x
    eye = np.eye(z.shape[1])
    a = eye + z @ sigma @ herm(z)
    b = eye + z @ sigma_m @ herm(z)
    dm = np.linalg.solve(a, z @ sigma) - np.linalg.solve(b, z @ sigma_m)
    hs_h = herm(ch.h_s)
    rate_part = np.einsum('m,min,min->n', np.asarray(cfg.omega), ch.g_i.conj(), dm @ hs_h)
    ph_part = np.einsum('l,lin,lin->n', np.asarray(cfg.alpha), ch.g_e.conj(), xi @ sigma @ hs_h)
    weight = penalty_weight(eff, d, pen, cfg)
    return rate_part + weight * cfg.eta / cfg.p_th_norm * ph_part


def fd_oracle(objective, point, direction, step=1e-6):
    """Central difference ``(F(p + h d) - F(p - h d)) / (2 h)``."""
    if not step > 0:
        raise ValueError("step must be positive")
    return (objective(point + step * direction) - objective(point - step * direction)) / (2.0 * step)
