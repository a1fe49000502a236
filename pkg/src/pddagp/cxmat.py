"""
Dense complex matrix helpers.

Every function accepts a single matrix or a stack of matrices with the
matrix dimensions last, in the numpy ``(..., n, n)`` convention.
"""

from typing import NamedTuple

import numpy as np

from .errors import (NonFinite, NonHermitian, NotPositiveDefinite, NotSquare,
                     SpectrumBelowOne)

__all__ = ['HermEig', 'herm', 'herm_eig', 'inv_sqrt_psd', 'logdet_psd',
           'vecd', 'hermitianize']

HERMITIAN_RTOL = 1e-8
SPECTRUM_FLOOR_TOL = 1e-6


class HermEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def herm(a):
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def _check_square(m):
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise NotSquare(f"expected square matrix, got shape {m.shape}")
    return m


def _check_hermitian(m):
    m = _check_square(m)
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has NaN or Inf entries")
    skew = np.linalg.norm(m - herm(m), axis=(-2, -1))
    size = np.linalg.norm(m, axis=(-2, -1))
    if np.any(skew > HERMITIAN_RTOL * size):
        raise NonHermitian(
            f"relative skew {float(np.max(skew / np.maximum(size, 1e-300))):.3e}"
            f" exceeds {HERMITIAN_RTOL}")
    return m


def herm_eig(m):
    """
    Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    m : array_like, shape (..., n, n)
        Hermitian matrix (or stack). Symmetry is checked with a relative
        tolerance of 1e-8.

    Returns
    -------
    HermEig
        Ascending real eigenvalues and the unitary matrix of eigenvectors
        (columns), so that ``m = U diag(w) U^H``.
    """
    m = _check_hermitian(m)
    w, u = np.linalg.eigh(m)
    return HermEig(w, u)


def _rebuild(u, w):
    return (u * w[..., None, :]) @ herm(u)


def inv_sqrt_psd(m):
    """
    Inverse square root of ``m = I + PSD``.

    The spectrum must be at least one (up to 1e-6); anything lower means the
    caller did not pass an ``I + PSD`` matrix and SpectrumBelowOne is raised
    instead of flooring the eigenvalues.
    """
    w, u = herm_eig(m)
    if w.size and np.min(w) < 1.0 - SPECTRUM_FLOOR_TOL:
        raise SpectrumBelowOne(f"smallest eigenvalue {np.min(w):.6g} < 1")
    return _rebuild(u, 1.0 / np.sqrt(w))


def logdet_psd(m):
    """Natural log-determinant of a Hermitian positive-definite matrix."""
    w, _ = herm_eig(m)
    if w.size and np.min(w) <= 0:
        raise NotPositiveDefinite(f"smallest eigenvalue {np.min(w):.6g}")
    return np.sum(np.log(w), axis=-1)


def vecd(m):
    """Main diagonal of a square matrix as a vector."""
    m = _check_square(m)
    return np.diagonal(m, axis1=-2, axis2=-1).copy()


def hermitianize(m):
    """Return ``(M + M^H) / 2``."""
    m = _check_square(m)
    return 0.5 * (m + herm(m))
