import numpy as np
import pytest
from hypothesis import given, strategies as st

from pddagp import cxmat
from pddagp.errors import (NonFinite, NonHermitian, NotPositiveDefinite, NotSquare,
                           SpectrumBelowOne)
from conftest import random_psd


def test_herm_swaps_last_axes_and_conjugates(rng):
    a = rng.standard_normal((3, 2, 4)) + 1j * rng.standard_normal((3, 2, 4))
    h = cxmat.herm(a)
    assert h.shape == (3, 4, 2)
    assert np.array_equal(h[1], a[1].conj().T)


def test_herm_eig_reconstructs_and_is_ascending(rng):
    a = random_psd(rng, 5)
    w, u = cxmat.herm_eig(a)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose((u * w) @ u.conj().T, a, atol=1e-10)
    assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-12)


def test_herm_eig_stacks(rng):
    a = np.stack([random_psd(rng, 3) for _ in range(4)])
    w, u = cxmat.herm_eig(a)
    assert w.shape == (4, 3) and u.shape == (4, 3, 3)
    for k in range(4):
        assert np.allclose(w[k], np.linalg.eigvalsh(a[k]))


def test_herm_eig_rejects_bad_input():
    with pytest.raises(NonHermitian):
        cxmat.herm_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotSquare):
        cxmat.herm_eig(np.ones((2, 3)))
    with pytest.raises(NonFinite):
        cxmat.herm_eig(np.array([[np.nan, 0], [0, 1.0]]))


def test_herm_eig_accepts_rounding_level_skew(rng):
    a = random_psd(rng, 4)
    a[0, 1] += 1e-14
    cxmat.herm_eig(a)


def test_inv_sqrt_identity_plus_psd(rng):
    b = np.eye(4) + random_psd(rng, 4)
    s = cxmat.inv_sqrt_psd(b)
    assert np.allclose(s, s.conj().T)
    assert np.allclose(s @ b @ s, np.eye(4), atol=1e-10)


def test_inv_sqrt_of_identity_is_identity():
    assert np.allclose(cxmat.inv_sqrt_psd(np.eye(3)), np.eye(3))


def test_inv_sqrt_scalar_case():
    assert np.isclose(cxmat.inv_sqrt_psd(np.array([[4.0]]))[0, 0], 0.5)


def test_inv_sqrt_rejects_spectrum_below_one():
    with pytest.raises(SpectrumBelowOne):
        cxmat.inv_sqrt_psd(np.diag([0.5, 2.0]))


def test_logdet_matches_slogdet(rng):
    a = np.eye(4) + random_psd(rng, 4)
    sign, ref = np.linalg.slogdet(a)
    assert sign.real > 0
    assert np.isclose(cxmat.logdet_psd(a), ref)


def test_logdet_identity_is_zero():
    assert cxmat.logdet_psd(np.eye(6)) == pytest.approx(0.0, abs=1e-15)


def test_logdet_rejects_singular():
    with pytest.raises(NotPositiveDefinite):
        cxmat.logdet_psd(np.diag([1.0, 0.0]))


def test_vecd_and_hermitianize(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(cxmat.vecd(a), np.diag(a))
    h = cxmat.hermitianize(a)
    assert np.allclose(h, h.conj().T)
    assert np.allclose(cxmat.hermitianize(h), h)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_logdet_of_product_is_additive(n, seed):
    rng = np.random.default_rng(seed)
    a = np.eye(n) + random_psd(rng, n)
    b = np.eye(n) + random_psd(rng, n)
    s = cxmat.inv_sqrt_psd(a)
    # a^{1/2} b a^{1/2} is Hermitian with det(a) det(b)
    half = np.linalg.inv(s)
    prod = cxmat.hermitianize(half @ b @ half)
    assert np.isclose(cxmat.logdet_psd(prod), cxmat.logdet_psd(a) + cxmat.logdet_psd(b), rtol=1e-8, atol=1e-8)


def test_herm_eig_identity_and_diagonal():
    w, u = cxmat.herm_eig(np.eye(2))
    assert np.allclose(w, [1, 1]) and np.allclose(u @ u.conj().T, np.eye(2))
    w, u = cxmat.herm_eig(np.diag([3.0, 1.0]))
    assert np.allclose(w, [1, 3])
    assert np.allclose(np.abs(u), [[0, 1], [1, 0]])


def test_inv_sqrt_diagonal():
    assert np.allclose(cxmat.inv_sqrt_psd(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]))


def test_logdet_diag_e():
    assert cxmat.logdet_psd(np.diag([np.e, np.e])) == pytest.approx(2.0)


def test_logdet_against_lu_determinant(rng):
    z = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    a = np.eye(3) + z @ random_psd(rng, 4) @ z.conj().T
    assert cxmat.logdet_psd(a) == pytest.approx(np.log(np.linalg.det(a).real), rel=1e-9)


def test_vecd_examples(rng):
    assert np.array_equal(cxmat.vecd(np.eye(3)), [1, 1, 1])
    assert np.array_equal(cxmat.vecd(np.diag([2j, -1])), [2j, -1])
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.array_equal(cxmat.vecd(a), [a[i, i] for i in range(3)])
    with pytest.raises(NotSquare):
        cxmat.vecd(np.ones((2, 3)))


def test_hermitianize_examples(rng):
    h = random_psd(rng, 3)
    h = 0.5 * (h + h.conj().T)
    assert np.array_equal(cxmat.hermitianize(h), h)
    assert np.array_equal(cxmat.hermitianize(np.array([[1.0, 2.0], [0.0, 1.0]])), [[1, 1], [1, 1]])
    with pytest.raises(NotSquare):
        cxmat.hermitianize(np.ones((2, 3)))
