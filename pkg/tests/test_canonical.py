"""Symplectic canonical form, square-root factorization and Williamson
diagonalization."""

import numpy as np
import pytest

from qlsid import (DoubledUpMatrix, SymplecticEigenData, delta, flat,
                   is_symplectic, symplectic_canonical_form,
                   symplectic_square_root, williamson)
from qlsid.errors import NonSemisimple, NotACovariance

from util import random_doubled, random_symplectic


def test_canonical_identity():
    data = symplectic_canonical_form(DoubledUpMatrix.identity(3))
    assert data.lambda_plus == [1.0, 1.0, 1.0]
    assert data.lambda_minus == [] and data.complex_pairs == []
    assert np.allclose(data.W.to_array(), np.eye(6))


def test_canonical_already_diagonal():
    script_n = delta(np.diag([4.0, 0.25]), np.zeros((2, 2)))
    data = symplectic_canonical_form(script_n)
    assert data.lambda_plus == [4.0, 0.25]
    assert np.allclose(data.W.to_array(), np.eye(4))


def test_canonical_random_reconstruction(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        big_n = random_doubled(rng, n, n)
        script_n = flat(big_n) @ big_n
        data = symplectic_canonical_form(script_n)
        assert is_symplectic(data.W, 1e-7)
        recon = (data.W @ data.nhat() @ flat(data.W)).to_array()
        scale = max(1.0, np.abs(script_n.to_array()).max())
        assert np.abs(recon - script_n.to_array()).max() <= 1e-8 * scale
        assert data.half_dim == n


def test_square_root_reproduces_canonical(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        big_n = random_doubled(rng, n, n)
        script_n = flat(big_n) @ big_n
        data = symplectic_canonical_form(script_n)
        sq = symplectic_square_root(data)
        res = (flat(sq.Nbar) @ sq.Nbar - data.nhat()).to_array()
        assert np.abs(res).max() < 1e-8
        # the second factor V = N W Nbar^{-1} is itself symplectic
        v = big_n.to_array() @ data.W.to_array() \
            @ np.linalg.inv(sq.Nbar.to_array())
        assert is_symplectic(v, 1e-6)


def test_square_root_slot_values():
    data = SymplecticEigenData(DoubledUpMatrix.identity(1),
                               lambda_plus=[4.0])
    sq = symplectic_square_root(data)
    assert np.isclose(sq.Nbar.upper_left[0, 0], 2.0)
    assert np.isclose(abs(sq.Nbar.upper_right[0, 0]), 0.0)

    data = SymplecticEigenData(DoubledUpMatrix.identity(1),
                               lambda_minus=[-9.0])
    sq = symplectic_square_root(data)
    assert np.isclose(abs(sq.Nbar.upper_left[0, 0]), 0.0)
    assert np.isclose(sq.Nbar.upper_right[0, 0], 3.0)


def test_square_root_pure_imaginary_pair():
    data = SymplecticEigenData(DoubledUpMatrix.identity(2),
                               complex_pairs=[(0.0, 2.0)])
    sq = symplectic_square_root(data)
    assert np.isclose(sq.alphas[0], 1.0) and np.isclose(sq.betas[0], 1.0)
    res = (flat(sq.Nbar) @ sq.Nbar - data.nhat()).to_array()
    assert np.abs(res).max() < 1e-12


def test_canonical_rejects_non_selfadjoint(rng):
    z = random_doubled(rng, 2, 2)
    with pytest.raises(Exception):
        symplectic_canonical_form(z)


def test_canonical_flags_nonsemisimple():
    # flat-self-adjoint (n1 Hermitian, n2 antisymmetric) but defective:
    # the eigenvalue 1 has a Jordan block
    n1 = np.array([[1.0, 1.0], [1.0, 1.0]])
    n2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    with pytest.raises(NonSemisimple):
        symplectic_canonical_form(delta(n1, n2))


def test_williamson_vacuum_and_thermal():
    res = williamson(np.diag([1.0, 0.0]))
    assert np.allclose(res.S_in.to_array(), np.eye(2))
    assert res.thermal_numbers == [0.0]
    res = williamson(np.diag([2.0, 1.0]))
    assert np.allclose(res.S_in.to_array(), np.eye(2))
    assert res.thermal_numbers == [1.0]


def test_williamson_pure_squeezed():
    v = np.array([[2.0, np.sqrt(2.0)], [np.sqrt(2.0), 1.0]])  # |M|^2 = N(N+1)
    res = williamson(v)
    assert res.is_pure
    out = res.S_in.to_array() @ v @ res.S_in.to_array().conj().T
    assert np.abs(out - np.diag([1.0, 0.0])).max() < 1e-8


def test_williamson_random_roundtrip(rng):
    for _ in range(30):
        m = int(rng.integers(1, 4))
        ns = np.sort(rng.uniform(0.0, 2.0, m))
        canonical = np.diag(np.concatenate([ns + 1.0, ns])).astype(complex)
        s = random_symplectic(rng, m)
        v = s.to_array() @ canonical @ s.to_array().conj().T
        res = williamson(v)
        assert np.abs(np.asarray(res.thermal_numbers) - ns).max() < 1e-8
        assert is_symplectic(res.S_in, 1e-7)
        out = res.S_in.to_array() @ v @ res.S_in.to_array().conj().T
        assert np.abs(out - res.canonical_form()).max() < 1e-7


def test_williamson_invariance_under_symplectic_congruence(rng):
    for _ in range(20):
        m = int(rng.integers(1, 4))
        ns = np.sort(rng.uniform(0.1, 2.0, m))
        canonical = np.diag(np.concatenate([ns + 1.0, ns])).astype(complex)
        s1, s2 = random_symplectic(rng, m), random_symplectic(rng, m)
        v = s1.to_array() @ canonical @ s1.to_array().conj().T
        v2 = s2.to_array() @ v @ s2.to_array().conj().T
        t1 = williamson(v).thermal_numbers
        t2 = williamson(v2).thermal_numbers
        assert np.abs(np.asarray(t1) - np.asarray(t2)).max() < 1e-8


def test_williamson_rejects_garbage():
    with pytest.raises(NotACovariance):
        williamson(np.array([[1.0, 0.5], [0.1, 1.0]]))
