"""Quantum linear system data model.

A system is the triple (S, C, Omega): a symplectic scattering matrix, a
doubled-up coupling C = Delta(C_minus, C_plus) and a doubled-up hamiltonian
matrix Omega = Delta(Omega_minus, Omega_plus) with Omega_minus Hermitian and
Omega_plus symmetric.  The derived drift is

    A = -1/2 C^flat C - i J Omega.

Everything downstream (transfer functions, spectra, identification) is a
function of this data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import williamson
from .doubled import (DEFAULT_TOL, DoubledUpMatrix, as_cmatrix, delta,
                      is_symplectic, j_matrix)
from .errors import ChannelMismatch, NotSymplectic, ShapeMismatch


@dataclass(frozen=True)
class QlsSystem:
    """An n-mode, m-channel quantum linear system."""

    coupling_minus: np.ndarray      # m x n
    coupling_plus: np.ndarray       # m x n
    ham_minus: np.ndarray           # n x n, Hermitian
    ham_plus: np.ndarray            # n x n, symmetric
    scattering: DoubledUpMatrix | None = None   # 2m x 2m symplectic, None = identity

    def __post_init__(self):
        cm = as_cmatrix(self.coupling_minus)
        cp = as_cmatrix(self.coupling_plus)
        om = as_cmatrix(self.ham_minus)
        op = as_cmatrix(self.ham_plus)
        if cm.shape != cp.shape:
            raise ShapeMismatch("coupling blocks differ in shape")
        n = om.shape[0]
        if om.shape != (n, n) or op.shape != (n, n) or cm.shape[1] != n:
            raise ShapeMismatch("hamiltonian/coupling shapes inconsistent")
        scale = max(np.abs(om).max(initial=0.0), np.abs(op).max(initial=0.0), 1.0)
        if np.abs(om - om.conj().T).max(initial=0.0) > 1e-8 * scale:
            raise ValueError("Omega_minus must be Hermitian")
        if np.abs(op - op.T).max(initial=0.0) > 1e-8 * scale:
            raise ValueError("Omega_plus must be symmetric")
        if self.scattering is not None:
            if self.scattering.half_rows != cm.shape[0]:
                raise ShapeMismatch("scattering size does not match channels")
            if not is_symplectic(self.scattering, 1e-6):
                raise NotSymplectic("scattering matrix is not symplectic")
        object.__setattr__(self, "coupling_minus", cm)
        object.__setattr__(self, "coupling_plus", cp)
        object.__setattr__(self, "ham_minus", 0.5 * (om + om.conj().T))
        object.__setattr__(self, "ham_plus", 0.5 * (op + op.T))

    @property
    def n_modes(self) -> int:
        return self.ham_minus.shape[0]

    @property
    def n_channels(self) -> int:
        return self.coupling_minus.shape[0]

    @property
    def coupling(self) -> DoubledUpMatrix:
        return delta(self.coupling_minus, self.coupling_plus)

    @property
    def hamiltonian(self) -> DoubledUpMatrix:
        return delta(self.ham_minus, self.ham_plus)

    def scattering_or_identity(self) -> DoubledUpMatrix:
        if self.scattering is None:
            return DoubledUpMatrix.identity(self.n_channels)
        return self.scattering

    @classmethod
    def passive(cls, coupling, hamiltonian, scattering=None) -> "QlsSystem":
        """Build a passive system from C_minus and Hermitian Omega_minus."""
        c = as_cmatrix(coupling)
        h = as_cmatrix(hamiltonian)
        return cls(c, np.zeros_like(c), h, np.zeros_like(h), scattering)

    @classmethod
    def one_mode(cls, c_minus, c_plus=0.0, omega_minus=0.0,
                 omega_plus=0.0) -> "QlsSystem":
        return cls([[c_minus]], [[c_plus]], [[omega_minus]], [[omega_plus]])

    @classmethod
    def trivial(cls, n_channels: int = 1) -> "QlsSystem":
        """Zero-mode system: the identity input-output map."""
        z = np.zeros((n_channels, 0))
        e = np.zeros((0, 0))
        return cls(z, z, e, e)


@dataclass(frozen=True)
class GaussianInput:
    """Stationary Gaussian input state with covariance V(N, M)."""

    N: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        n = as_cmatrix(self.N)
        m = as_cmatrix(self.M)
        if n.shape != m.shape or n.shape[0] != n.shape[1]:
            raise ShapeMismatch("N and M must be square of equal size")
        scale = max(np.abs(n).max(initial=0.0), np.abs(m).max(initial=0.0), 1.0)
        if np.abs(n - n.conj().T).max(initial=0.0) > 1e-8 * scale:
            raise ValueError("N must be Hermitian")
        if np.abs(m - m.T).max(initial=0.0) > 1e-8 * scale:
            raise ValueError("M must be symmetric")
        object.__setattr__(self, "N", 0.5 * (n + n.conj().T))
        object.__setattr__(self, "M", 0.5 * (m + m.T))
        v = self.covariance()
        if np.linalg.eigvalsh(0.5 * (v + v.conj().T)).min() < -1e-8 * scale:
            raise ValueError("V(N, M) is not positive semidefinite")

    @property
    def n_channels(self) -> int:
        return self.N.shape[0]

    def covariance(self) -> np.ndarray:
        """The 2m x 2m matrix [N^T + 1, M; M^dag, N]."""
        n, m = self.N, self.M
        return np.block([[n.T + np.eye(n.shape[0]), m], [m.conj().T, n]])

    def thermal_numbers(self) -> list:
        return williamson(self.covariance()).thermal_numbers

    def is_pure(self, threshold: float = 1e-6) -> bool:
        return all(t < threshold for t in self.thermal_numbers())

    def is_vacuum(self, tol: float = DEFAULT_TOL) -> bool:
        return (np.abs(self.N).max(initial=0.0) <= tol
                and np.abs(self.M).max(initial=0.0) <= tol)

    @classmethod
    def vacuum(cls, n_channels: int = 1) -> "GaussianInput":
        z = np.zeros((n_channels, n_channels))
        return cls(z, z)

    @classmethod
    def squeezed(cls, n: float, phase: float = 0.0) -> "GaussianInput":
        """Single-channel pure squeezed state: |M|^2 = N(N+1)."""
        m = np.exp(1j * phase) * np.sqrt(n * (n + 1.0))
        return cls([[n]], [[m]])


@dataclass(frozen=True)
class StateSpace:
    """Doubled-up state-space realization (A, B, C, D), physical or not."""

    A: DoubledUpMatrix
    B: DoubledUpMatrix
    C: DoubledUpMatrix
    D: DoubledUpMatrix

    def __post_init__(self):
        n, m = self.A.half_rows, self.D.half_rows
        if (self.A.half_cols != n or self.B.half_rows != n
                or self.B.half_cols != m or self.C.half_rows != m
                or self.C.half_cols != n or self.D.half_cols != m):
            raise ShapeMismatch("state-space block shapes inconsistent")


def drift(sys: QlsSystem) -> DoubledUpMatrix:
    """A = Delta(A_minus, A_plus) = -1/2 C^flat C - i J Omega."""
    c = sys.coupling
    cfc = c.flat() @ c
    # -i J Omega is doubled-up with blocks (-i Omega_minus, -i Omega_plus).
    return DoubledUpMatrix(-0.5 * cfc.upper_left - 1j * sys.ham_minus,
                           -0.5 * cfc.upper_right - 1j * sys.ham_plus)


def drift_blocks(sys: QlsSystem) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise A_minus, A_plus via the block formula."""
    cm, cp = sys.coupling_minus, sys.coupling_plus
    a_minus = -0.5 * (cm.conj().T @ cm - cp.T @ cp.conj()) - 1j * sys.ham_minus
    a_plus = -0.5 * (cm.conj().T @ cp - cp.T @ cm.conj()) - 1j * sys.ham_plus
    return a_minus, a_plus


def state_space(sys: QlsSystem) -> StateSpace:
    """Physical realization (A, -C^flat, C, S-embedded identity)."""
    c = sys.coupling
    return StateSpace(drift(sys), c.flat().scale(-1.0), c,
                      sys.scattering_or_identity())


def is_physically_realizable(ss: StateSpace, tol: float = DEFAULT_TOL) -> bool:
    """A + A^flat + C^flat C = 0 and B = -C^flat, both within tol."""
    scale = max(ss.A.norm(), ss.C.norm() ** 2, 1.0)
    res1 = (ss.A + ss.A.flat() + ss.C.flat() @ ss.C).to_array()
    res2 = (ss.B + ss.C.flat()).to_array()
    r1 = np.abs(res1).max(initial=0.0)
    r2 = np.abs(res2).max(initial=0.0)
    return r1 <= tol * scale and r2 <= tol * scale


def observability_matrix(sys: QlsSystem) -> np.ndarray:
    """Stack of C (J Omega)^k for k = 0 .. 2n-1."""
    n = sys.n_modes
    c = sys.coupling.to_array()
    jo = j_matrix(n) @ sys.hamiltonian.to_array()
    blocks = []
    cur = c
    for _ in range(2 * n):
        blocks.append(cur)
        cur = cur @ jo
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    return np.vstack(blocks)


def controllability_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[B, AB, ..., A^(d-1) B] with d = state dimension."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    d = a.shape[0]
    blocks = []
    cur = b
    for _ in range(d):
        blocks.append(cur)
        cur = a @ cur
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    return np.hstack(blocks)


def _numeric_rank(mat: np.ndarray, rel_tol: float) -> int:
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0])) if s[0] > 0 else 0


def is_minimal(sys: QlsSystem, tol: float = 1e-10) -> bool:
    """Observability rank test: rank of the stacked matrix equals 2n."""
    if sys.n_modes == 0:
        return True
    return _numeric_rank(observability_matrix(sys), tol) == 2 * sys.n_modes


def is_hurwitz(sys: QlsSystem) -> bool:
    """All drift eigenvalues strictly in the open left half-plane."""
    if sys.n_modes == 0:
        return True
    return float(np.linalg.eigvals(drift(sys).to_array()).real.max()) < 0


def one_mode_hurwitz_closed_form(c_minus: complex, c_plus: complex,
                                 omega_minus: float,
                                 omega_plus: complex) -> bool:
    """Closed-form stability test for a one-mode system.

    Stable iff either |c-| > |c+| with |w-| >= |w+|, or |w+| > |w-| with
    sqrt(|w+|^2 - |w-|^2) < (|c-|^2 - |c+|^2) / 2.
    """
    cm, cp = abs(c_minus), abs(c_plus)
    wm, wp = abs(omega_minus), abs(omega_plus)
    if cm > cp and wm >= wp:
        return True
    return wp > wm and np.sqrt(wp ** 2 - wm ** 2) < 0.5 * (cm ** 2 - cp ** 2)


def is_passive(sys: QlsSystem, tol: float = DEFAULT_TOL) -> bool:
    """C_plus and Omega_plus both below tol."""
    return (np.abs(sys.coupling_plus).max(initial=0.0) <= tol
            and np.abs(sys.ham_plus).max(initial=0.0) <= tol)


def _embed(block: np.ndarray, rows: slice, cols: slice,
           shape: tuple[int, int]) -> np.ndarray:
    out = np.zeros(shape, dtype=complex)
    out[rows, cols] = block
    return out


def series_product(g2: QlsSystem, g1: QlsSystem) -> QlsSystem:
    """Feed the output of g1 into g2 (the cascade g2 <| g1).

    Both systems must have the same channel count and trivial scattering.
    Modes are ordered (g1 modes, then g2 modes); the cascade hamiltonian
    gains the cross term Im_flat(C2~^flat C1~) with Im_flat X = (X - X^flat)/2i.
    """
    if g1.n_channels != g2.n_channels:
        raise ChannelMismatch(
            f"channel counts differ: {g1.n_channels} vs {g2.n_channels}")
    for g in (g1, g2):
        if g.scattering is not None and np.abs(
                g.scattering.to_array()
                - np.eye(2 * g.n_channels)).max() > 1e-10:
            raise NotSymplectic("series product requires trivial scattering")
    n1, n2 = g1.n_modes, g2.n_modes
    n = n1 + n2
    m = g1.n_channels
    shape = (m, n)
    c1m = _embed(g1.coupling_minus, slice(None), slice(0, n1), shape)
    c1p = _embed(g1.coupling_plus, slice(None), slice(0, n1), shape)
    c2m = _embed(g2.coupling_minus, slice(None), slice(n1, n), shape)
    c2p = _embed(g2.coupling_plus, slice(None), slice(n1, n), shape)
    c1 = delta(c1m, c1p)
    c2 = delta(c2m, c2p)

    cross = c2.flat() @ c1
    # Im_flat(X) = (X - X^flat) / 2i, blockwise on the doubled-up form.
    im_minus = (cross.upper_left - cross.flat().upper_left) / 2j
    im_plus = (cross.upper_right - cross.flat().upper_right) / 2j

    om = np.zeros((n, n), dtype=complex)
    op = np.zeros((n, n), dtype=complex)
    om[:n1, :n1] = g1.ham_minus
    om[n1:, n1:] = g2.ham_minus
    op[:n1, :n1] = g1.ham_plus
    op[n1:, n1:] = g2.ham_plus
    return QlsSystem(c1m + c2m, c1p + c2p, om + im_minus, op + im_plus)


def apply_symplectic(sys: QlsSystem, t: DoubledUpMatrix,
                     tol: float = DEFAULT_TOL) -> QlsSystem:
    """Change of system coordinates: J Omega' = T J Omega T^flat, C' = C T^flat."""
    n = sys.n_modes
    if t.half_rows != n or t.half_cols != n:
        raise ShapeMismatch("transform size does not match mode count")
    if not is_symplectic(t, max(tol, 1e-6)):
        raise NotSymplectic("coordinate change must be symplectic")
    tf = t.flat()
    c_new = sys.coupling @ tf
    # -i J Omega is doubled-up; conjugate it and multiply back by i.
    m = t @ DoubledUpMatrix(-1j * sys.ham_minus, -1j * sys.ham_plus) @ tf
    return QlsSystem(c_new.upper_left, c_new.upper_right,
                     1j * m.upper_left, 1j * m.upper_right,
                     sys.scattering)
