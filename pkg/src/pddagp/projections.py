"""Euclidean projections onto the covariance budget set and the unit circle."""

import numpy as np

from .cxmat import herm, herm_eig

__all__ = ['water_level', 'project_covariances', 'project_phases']

_ON_CIRCLE = 4 * np.finfo(float).eps


def water_level(lam, budget):
    """
    Level ``nu >= 0`` with ``sum(max(lam - nu, 0)) == budget``.

    Returns 0 when the clamped eigenvalues already fit in the budget. The
    level is found exactly by scanning the sorted breakpoints.
    """
    if not budget > 0:
        raise ValueError("budget must be positive")
    lam = np.asarray(lam, dtype=float).ravel()
    if np.sum(np.maximum(lam, 0.0)) <= budget:
        return 0.0
    u = np.sort(lam)[::-1]
    csum = np.cumsum(u)
    k = np.arange(1, u.size + 1)
    # k = 1 always qualifies exactly (u*1 - u + budget == budget)
    active = k * u - csum + budget > 0
    j = np.nonzero(active)[0][-1]
    return float((csum[j] - budget) / (j + 1))


def project_covariances(x, p_b):
    """
    Project a stack of Hermitian blocks onto
    ``{X_m >= 0, sum_m tr(X_m) <= p_b}``.

    The blocks share one budget, so the eigenvalues of all blocks are
    projected jointly and each block is rebuilt with its own eigenvectors.

    Parameters
    ----------
    x : ndarray, shape (m, n, n)
    p_b : float

    Returns
    -------
    ndarray, shape (m, n, n)
    """
    w, u = herm_eig(x)
    nu = water_level(w, p_b)
    w = np.maximum(w - nu, 0.0)
    return (u * w[..., None, :]) @ herm(u)


def project_phases(phi):
    """Radial projection onto ``|phi_n| = 1``; zeros map to 1."""
    phi = np.asarray(phi, dtype=complex)
    mag = np.abs(phi)
    out = phi.copy()
    out[mag == 0] = 1.0
    # entries already on the circle up to rounding are kept bit-for-bit
    fix = (mag > 0) & (np.abs(mag - 1.0) > _ON_CIRCLE)
    out[fix] = phi[fix] / mag[fix]
    return out
