"""System data model: drift, realizability, minimality, stability, series
product and symplectic coordinate changes."""

import numpy as np
import pytest

from qlsid import (GaussianInput, QlsSystem, apply_symplectic,
                   controllability_matrix, delta, drift, drift_blocks,
                   eval_transfer, is_hurwitz, is_minimal, is_passive,
                   is_physically_realizable, j_matrix,
                   observability_matrix, one_mode_hurwitz_closed_form,
                   series_product, state_space, stationary_covariance)
from qlsid.errors import ChannelMismatch, NotSymplectic

from util import (random_cmatrix, random_hurwitz, random_symplectic,
                  random_system)


def example3(x: float) -> QlsSystem:
    return QlsSystem.passive(
        [[0.0, 2.0 * np.sqrt(2.0)]],
        0.5 * np.array([[4.0 + x, 4.0 - x], [4.0 - x, 4.0 + x]]))


def test_constructor_validates_symmetry():
    with pytest.raises(ValueError):
        QlsSystem([[1.0]], [[0.0]], [[1.0j]], [[0.0]])   # Omega- not Hermitian


def test_drift_passive_cavity():
    sys_ = QlsSystem.one_mode(np.sqrt(2.0))
    assert np.allclose(drift(sys_).to_array(), -np.eye(2))


def test_drift_closed_dynamics(rng):
    om = random_cmatrix(rng, 2, 2)
    om = om + om.conj().T
    op = random_cmatrix(rng, 2, 2)
    op = op + op.T
    sys_ = QlsSystem(np.zeros((1, 2)), np.zeros((1, 2)), om, op)
    jo = j_matrix(2) @ delta(om, op).to_array()
    assert np.allclose(drift(sys_).to_array(), -1j * jo)


def test_drift_blockwise_agrees_with_matrix(rng):
    for _ in range(50):
        sys_ = random_system(rng, int(rng.integers(1, 4)))
        am, ap = drift_blocks(sys_)
        assert np.abs(delta(am, ap).to_array()
                      - drift(sys_).to_array()).max() < 1e-12


def test_physically_realizable_by_construction(rng):
    for _ in range(50):
        sys_ = random_system(rng, int(rng.integers(1, 4)))
        assert is_physically_realizable(state_space(sys_), 1e-10)


def test_physically_realizable_detects_violations(rng):
    sys_ = random_system(rng, 2)
    ss = state_space(sys_)
    bad_a = delta(ss.A.upper_left + 1e-3, ss.A.upper_right)
    from qlsid.systems import StateSpace
    assert not is_physically_realizable(StateSpace(bad_a, ss.B, ss.C, ss.D),
                                        1e-6)
    bad_b = ss.C.flat()   # B = +C^flat violates the sign
    assert not is_physically_realizable(StateSpace(ss.A, bad_b, ss.C, ss.D),
                                        1e-6)


def test_observability_stack_shape_and_zero_coupling():
    sys_ = QlsSystem.one_mode(1.0, 0.0, 1.0)
    obs = observability_matrix(sys_)
    assert obs.shape == (4, 2)
    zero = QlsSystem([[0.0]], [[0.0]], [[1.0]], [[0.0]])
    assert np.abs(observability_matrix(zero)).max() == 0.0
    assert not is_minimal(zero)


def test_minimality_example3_boundary():
    assert not is_minimal(example3(4.0))
    for x in (0.0, 8.0, -1.0, -4.0, 2.5):
        assert is_minimal(example3(x))


def test_minimal_equals_controllable(rng):
    for _ in range(1000):
        sys_ = random_system(rng, int(rng.integers(1, 4)))
        a = drift(sys_).to_array()
        b = -sys_.coupling.flat().to_array()
        sv = np.linalg.svd(controllability_matrix(a, b), compute_uv=False)
        rank = int(np.sum(sv > 1e-10 * sv[0]))
        assert is_minimal(sys_) == (rank == 2 * sys_.n_modes)


def test_hurwitz_implies_minimal_not_conversely(rng):
    for _ in range(300):
        sys_ = random_system(rng, int(rng.integers(1, 4)))
        if is_hurwitz(sys_):
            assert is_minimal(sys_)
    # minimal but unstable: |c+| > |c-| with equal hamiltonian terms
    counter = QlsSystem.one_mode(0.3, 1.0, 0.5, 0.5)
    assert is_minimal(counter) and not is_hurwitz(counter)


def test_one_mode_hurwitz_closed_form_cases():
    assert one_mode_hurwitz_closed_form(1.0, 0.0, 1.0, 0.0)
    # sqrt(|w+|^2 - |w-|^2) = 2 >= (|c-|^2 - |c+|^2)/2 = 1/2
    assert not one_mode_hurwitz_closed_form(1.0, 0.0, 0.0, 2.0)
    assert not is_hurwitz(QlsSystem.one_mode(0.0, 1.0, 0.0, 0.0))
    undamped = QlsSystem.one_mode(0.0, 0.0, 0.0, 0.0)
    assert not is_hurwitz(undamped)


def test_one_mode_hurwitz_closed_form_matches_eigenvalues(rng):
    for _ in range(1000):
        cm = complex(rng.standard_normal(), rng.standard_normal())
        cp = 0.8 * complex(rng.standard_normal(), rng.standard_normal())
        wm = 1.5 * rng.standard_normal()
        wp = 0.8 * complex(rng.standard_normal(), rng.standard_normal())
        sys_ = QlsSystem.one_mode(cm, cp, wm, wp)
        assert one_mode_hurwitz_closed_form(cm, cp, wm, wp) == is_hurwitz(sys_)


def test_series_with_trivial_system_is_identity(rng):
    g = random_system(rng, 2)
    for combo in (series_product(QlsSystem.trivial(1), g),
                  series_product(g, QlsSystem.trivial(1))):
        assert combo.n_modes == 2
        for w in (0.5, 2.0):
            assert np.abs(eval_transfer(combo, -1j * w)
                          - eval_transfer(g, -1j * w)).max() < 1e-12


def test_series_transfer_is_product(rng):
    for _ in range(30):
        g1 = random_system(rng, int(rng.integers(1, 3)))
        g2 = random_system(rng, int(rng.integers(1, 3)))
        g = series_product(g2, g1)
        assert g.n_modes == g1.n_modes + g2.n_modes
        for w in np.logspace(-1, 1, 8):
            s0 = -1j * w
            lhs = eval_transfer(g, s0)
            rhs = eval_transfer(g2, s0) @ eval_transfer(g1, s0)
            assert np.abs(lhs - rhs).max() < 1e-8


def test_series_drift_block_structure(rng):
    """The cascade drift is block triangular with -C2^flat C1 feeding forward."""
    for _ in range(20):
        g1 = random_system(rng, int(rng.integers(1, 3)))
        g2 = random_system(rng, int(rng.integers(1, 3)))
        g = series_product(g2, g1)
        n1, n = g1.n_modes, g1.n_modes + g2.n_modes
        perm = (list(range(n1)) + list(range(n, n + n1))
                + list(range(n1, n)) + list(range(n + n1, 2 * n)))
        p = np.eye(2 * n)[perm]
        a = p @ drift(g).to_array() @ p.T
        assert np.abs(a[:2 * n1, :2 * n1] - drift(g1).to_array()).max() < 1e-12
        assert np.abs(a[:2 * n1, 2 * n1:]).max() < 1e-12
        assert np.abs(a[2 * n1:, 2 * n1:] - drift(g2).to_array()).max() < 1e-12
        cross = -(g2.coupling.flat() @ g1.coupling).to_array()
        assert np.abs(a[2 * n1:, :2 * n1] - cross).max() < 1e-12


def test_series_associativity_on_transfer(rng):
    for _ in range(15):
        g1, g2, g3 = (random_system(rng, int(rng.integers(1, 3)))
                      for _ in range(3))
        left = series_product(g3, series_product(g2, g1))
        right = series_product(series_product(g3, g2), g1)
        for w in (0.4, 1.6):
            assert np.abs(eval_transfer(left, -1j * w)
                          - eval_transfer(right, -1j * w)).max() < 1e-8


def test_series_rejects_channel_mismatch(rng):
    g1 = random_system(rng, 1, m=1)
    g2 = random_system(rng, 1, m=2)
    with pytest.raises(ChannelMismatch):
        series_product(g2, g1)


def test_apply_symplectic_identity_and_inverse(rng):
    sys_ = random_system(rng, 2)
    same = apply_symplectic(sys_, random_symplectic(rng, 2, scale=0.0))
    assert np.abs(same.coupling.to_array()
                  - sys_.coupling.to_array()).max() < 1e-12
    t = random_symplectic(rng, 2)
    back = apply_symplectic(apply_symplectic(sys_, t), t.inv())
    assert np.abs(back.coupling.to_array()
                  - sys_.coupling.to_array()).max() < 1e-8
    assert np.abs(back.hamiltonian.to_array()
                  - sys_.hamiltonian.to_array()).max() < 1e-8


def test_apply_symplectic_preserves_transfer(rng):
    for _ in range(20):
        sys_ = random_system(rng, int(rng.integers(1, 4)))
        t = random_symplectic(rng, sys_.n_modes)
        sys2 = apply_symplectic(sys_, t)
        for w in (0.3, 1.7):
            assert np.abs(eval_transfer(sys_, -1j * w)
                          - eval_transfer(sys2, -1j * w)).max() < 1e-8


def test_apply_symplectic_preserves_thermal_numbers(rng):
    for _ in range(15):
        sys_ = random_hurwitz(rng, int(rng.integers(1, 4)))
        vin = GaussianInput.squeezed(rng.uniform(0.1, 1.0),
                                     rng.uniform(0, 2 * np.pi))
        t = random_symplectic(rng, sys_.n_modes)
        t1 = stationary_covariance(sys_, vin).thermal_numbers
        t2 = stationary_covariance(apply_symplectic(sys_, t),
                                   vin).thermal_numbers
        assert np.abs(np.asarray(t1) - np.asarray(t2)).max() < 1e-8


def test_apply_symplectic_rejects_non_symplectic(rng):
    sys_ = random_system(rng, 2)
    bad = delta(2.0 * np.eye(2), np.zeros((2, 2)))
    with pytest.raises(NotSymplectic):
        apply_symplectic(sys_, bad)


def test_is_passive():
    assert is_passive(QlsSystem.one_mode(1.0, 0.0, 0.5))
    assert not is_passive(QlsSystem.one_mode(1.0, 0.0, 0.5, 0.1))
    assert not is_passive(QlsSystem.one_mode(1.0, 0.1, 0.5, 0.0))
    assert is_passive(example3(-1.0))


def test_gaussian_input_purity():
    assert GaussianInput.vacuum(1).is_pure()
    assert GaussianInput.squeezed(1.0).is_pure()   # |M|^2 = N(N+1)
    thermal = GaussianInput([[1.0]], [[0.0]])
    assert not thermal.is_pure()
    with pytest.raises(ValueError):
        GaussianInput([[1.0]], [[5.0]])   # violates V >= 0
