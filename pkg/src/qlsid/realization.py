"""Physical realization of a transfer function and symplectic equivalence.

Starting from the diagonal (non-physical) realization (A0, B0, C0), the
Gram matrix Q = T^dag J T is the unique solution of

    Q A0 + A0^dag Q + C0^dag J C0 = 0,

so that T^flat T = J Q.  The canonical decomposition J Q = W nhat W^flat and
its square root nhat = Tbar^flat Tbar give T = Tbar W^flat, and the
transformed triple satisfies the physical-realizability conditions
A + A^flat + C^flat C = 0, B = -C^flat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .canonical import symplectic_canonical_form, symplectic_square_root
from .doubled import (DEFAULT_TOL, DoubledUpMatrix, as_cmatrix, j_matrix)
from .errors import (NonPhysical, NotHurwitz, NotMinimal, ShapeMismatch,
                     SingularTransform)
from .systems import (QlsSystem, StateSpace, drift, is_hurwitz,
                      is_minimal, state_space)
from .transfer import TransferFunctionSISO, gilbert_realization


@dataclass(frozen=True)
class PhysicalizationTrace:
    """Intermediate stages of the transfer-function-to-system pipeline."""

    gilbert: StateSpace
    Q: np.ndarray
    TflatT: DoubledUpMatrix
    W: DoubledUpMatrix
    Tbar: DoubledUpMatrix
    T: DoubledUpMatrix
    result: QlsSystem

    def stage_residuals(self) -> dict:
        """Defining-equation residuals of every pipeline stage."""
        a0 = self.gilbert.A.to_array()
        c0 = self.gilbert.C.to_array()
        jn = j_matrix(self.gilbert.A.half_rows)
        jm = j_matrix(self.gilbert.C.half_rows)
        gram = np.abs(self.Q @ a0 + a0.conj().T @ self.Q
                      + c0.conj().T @ jm @ c0).max(initial=0.0)
        canon = np.abs((self.TflatT - jn @ self.Q)
                       if isinstance(self.TflatT, np.ndarray)
                       else self.TflatT.to_array() - jn @ self.Q).max(initial=0.0)
        factor = np.abs((self.T.flat() @ self.T - self.TflatT).to_array()
                        ).max(initial=0.0)
        ss = state_space(self.result)
        pr = np.abs((ss.A + ss.A.flat() + ss.C.flat() @ ss.C).to_array()
                    ).max(initial=0.0)
        return {"gram_equation": float(gram),
                "canonical_form": float(canon),
                "square_root_factor": float(factor),
                "physical_realizability": float(pr)}


def solve_realization_gram(a0, c0) -> np.ndarray:
    """Solve (T^dag J T) A0 + A0^dag (T^dag J T) + C0^dag J C0 = 0.

    a0 must be Hurwitz; the Hermitian solution equals the integral of
    J (C0 e^{A0 t})^dag J (C0 e^{A0 t}) dt conjugated by J.
    """
    a0 = as_cmatrix(a0)
    c0 = as_cmatrix(c0)
    if a0.shape[0] != a0.shape[1] or c0.shape[1] != a0.shape[0]:
        raise ShapeMismatch(f"incompatible shapes {a0.shape}, {c0.shape}")
    if a0.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    if np.linalg.eigvals(a0).real.max() >= 0:
        raise NotHurwitz("gram equation needs a Hurwitz A0")
    jm = j_matrix(c0.shape[0] // 2)
    rhs = -(c0.conj().T @ jm @ c0)
    q = scipy.linalg.solve_sylvester(a0.conj().T, a0, rhs)
    return 0.5 * (q + q.conj().T)


def physicalize(tf: TransferFunctionSISO,
                tol: float = DEFAULT_TOL) -> PhysicalizationTrace:
    """Construct a physically realizable system with transfer function tf.

    tf must be the transfer function of some stable system and satisfy the
    diagonal-realization genericity conditions (distinct, non-real poles);
    violations surface as stage errors.
    """
    ss = gilbert_realization(tf)
    n = ss.A.half_rows
    if n == 0:
        trivial = QlsSystem.trivial(1)
        eye = DoubledUpMatrix.identity(0)
        return PhysicalizationTrace(ss, np.zeros((0, 0), complex), eye, eye,
                                    eye, eye, trivial)
    a0 = ss.A.to_array()
    c0 = ss.C.to_array()
    q = solve_realization_gram(a0, c0)
    script_n = j_matrix(n) @ q
    cond = np.linalg.cond(script_n)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularTransform(
            f"T^flat T has condition number {cond:.3e}")
    tft = DoubledUpMatrix.from_array(script_n, tol=1e-6)
    eigen = symplectic_canonical_form(tft, tol=tol)
    sqroot = symplectic_square_root(eigen)
    tbar = sqroot.Nbar
    t = tbar @ eigen.W.flat()

    t_arr = t.to_array()
    t_inv = np.linalg.inv(t_arr)
    a = DoubledUpMatrix.from_array(t_arr @ a0 @ t_inv, tol=1e-6)
    c = DoubledUpMatrix.from_array(c0 @ t_inv, tol=1e-6)
    cfc = c.flat() @ c
    # A = -1/2 C^flat C - i J Omega  =>  Omega = i J (A + 1/2 C^flat C)
    m_doubled = DoubledUpMatrix(a.upper_left + 0.5 * cfc.upper_left,
                                a.upper_right + 0.5 * cfc.upper_right)
    ham_minus = 1j * m_doubled.upper_left
    ham_plus = 1j * m_doubled.upper_right
    scale = max(np.abs(ham_minus).max(initial=0.0),
                np.abs(ham_plus).max(initial=0.0), 1.0)
    herm_res = np.abs(ham_minus - ham_minus.conj().T).max(initial=0.0)
    symm_res = np.abs(ham_plus - ham_plus.T).max(initial=0.0)
    if max(herm_res, symm_res) > 1e-6 * scale:
        raise NonPhysical(
            f"hamiltonian symmetry residual {max(herm_res, symm_res):.3e}")
    result = QlsSystem(c.upper_left, c.upper_right,
                       0.5 * (ham_minus + ham_minus.conj().T),
                       0.5 * (ham_plus + ham_plus.T))
    ss_res = state_space(result)
    pr = np.abs((ss_res.A + ss_res.A.flat()
                 + ss_res.C.flat() @ ss_res.C).to_array()).max(initial=0.0)
    b_res = np.abs((t_arr @ ss.B.to_array())
                   - ss_res.B.to_array()).max(initial=0.0)
    if max(pr, b_res) > 1e-6 * max(1.0, np.abs(a0).max()):
        raise NonPhysical(f"realizability residuals {pr:.3e}, {b_res:.3e}")
    return PhysicalizationTrace(ss, q, tft, eigen.W, tbar, t, result)


def equivalence_check(sys1: QlsSystem, sys2: QlsSystem,
                      tol: float = DEFAULT_TOL):
    """Symplectic T with J Omega2 = T J Omega1 T^flat and C2 = C1 T^flat.

    Returns the transform when the two minimal, stable systems share a
    transfer function; returns None otherwise.  The candidate similarity is
    assembled from matched drift eigenbases and then *tested* for
    symplecticity, so hypothesis failures are detected rather than assumed.
    """
    for s in (sys1, sys2):
        if not is_minimal(s):
            raise NotMinimal("equivalence check requires minimal systems")
        if not is_hurwitz(s):
            raise NotHurwitz("equivalence check requires stable systems")
    if sys1.n_modes != sys2.n_modes or sys1.n_channels != sys2.n_channels:
        return None
    n = sys1.n_modes
    if n == 0:
        return DoubledUpMatrix.identity(0)

    a1 = drift(sys1).to_array()
    a2 = drift(sys2).to_array()
    e1, v1 = np.linalg.eig(a1)
    e2, v2 = np.linalg.eig(a2)
    scale = max(np.abs(e1).max(), 1.0)

    # pair the spectra; equal transfer functions force equal pole multisets
    order = []
    used = set()
    for lam in e1:
        cand = [j for j in range(2 * n)
                if j not in used and abs(e2[j] - lam) <= 1e-7 * scale]
        if not cand:
            return None
        j = min(cand, key=lambda j: abs(e2[j] - lam))
        used.add(j)
        order.append(j)
    v2 = v2[:, order]

    c1v = sys1.coupling.to_array() @ v1
    c2v = sys2.coupling.to_array() @ v2
    dvals = np.zeros(2 * n, dtype=complex)
    for i in range(2 * n):
        r = int(np.argmax(np.abs(c2v[:, i])))
        if abs(c2v[r, i]) < 1e-12:
            return None
        dvals[i] = c1v[r, i] / c2v[r, i]
        resid = np.abs(c1v[:, i] - dvals[i] * c2v[:, i]).max()
        if resid > 1e-6 * max(1.0, np.abs(c1v[:, i]).max()):
            return None

    t_arr = v2 @ np.diag(dvals) @ np.linalg.inv(v1)
    try:
        t = DoubledUpMatrix.from_array(t_arr, tol=1e-6)
    except Exception:
        return None
    from .doubled import is_symplectic
    if not is_symplectic(t, max(tol, 1e-7)):
        return None
    # confirm the full transformation relations
    c_t = (sys1.coupling @ t.flat()).to_array()
    if np.abs(c_t - sys2.coupling.to_array()).max() > 1e-6 * max(
            1.0, np.abs(c_t).max()):
        return None
    jo1 = j_matrix(n) @ sys1.hamiltonian.to_array()
    jo2 = j_matrix(n) @ sys2.hamiltonian.to_array()
    res = np.abs(t_arr @ jo1 @ t.flat().to_array() - jo2).max(initial=0.0)
    if res > 1e-6 * max(1.0, np.abs(jo2).max()):
        return None
    return t
