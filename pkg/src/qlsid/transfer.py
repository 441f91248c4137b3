"""Transfer functions of quantum linear systems.

For a SISO system the 2x2 doubled-up transfer matrix

    Xi(s) = 1 - C (s - A)^(-1) C^flat  =  [xi_minus(s)        xi_plus(s)      ]
                                          [xi_plus(s#)#       xi_minus(s#)#   ]

is carried by the pair of rational functions (xi_minus, xi_plus); xi_minus
is monic (value 1 at infinity) and xi_plus vanishes at infinity.  On the
imaginary axis Xi is symplectic, so |xi_minus|^2 - |xi_plus|^2 = 1 there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .doubled import DEFAULT_TOL, DoubledUpMatrix, sigma_swap
from .errors import (DegenerateSpectrum, NotHurwitz, NotPassive, PoleHit,
                     QlsError, RealPole, RepeatedPole, ResidueRankExceedsOne,
                     ShapeMismatch)
from .rational import RationalFn, _trim_leading
from .systems import QlsSystem, StateSpace, drift, is_hurwitz, is_passive


@dataclass(frozen=True)
class TransferFunctionSISO:
    """The pair (xi_minus, xi_plus) of a single-channel transfer function."""

    xi_minus: RationalFn
    xi_plus: RationalFn

    def __post_init__(self):
        xm, xp = self.xi_minus, self.xi_plus
        if len(xm.zeros) != len(xm.poles):
            raise ValueError("xi_minus must have equal zero and pole counts")
        if abs(xm.gain - 1.0) > 1e-6:
            raise ValueError(f"xi_minus must be monic, gain = {xm.gain}")
        if not xp.is_zero and len(xp.zeros) >= len(xp.poles):
            raise ValueError("xi_plus must vanish at infinity")

    @property
    def is_passive(self) -> bool:
        return self.xi_plus.is_zero

    @classmethod
    def trivial(cls) -> "TransferFunctionSISO":
        return cls(RationalFn.const(1.0), RationalFn.zero())

    def matrix_at(self, s: complex) -> np.ndarray:
        """The 2x2 doubled-up value at one point."""
        xm = complex(self.xi_minus(s))
        xp = complex(self.xi_plus(s))
        xm_m = np.conj(self.xi_minus(np.conj(s)))
        xp_m = np.conj(self.xi_plus(np.conj(s)))
        return np.array([[xm, xp], [xp_m, xm_m]])

    def symplectic_residual(self, omegas=None) -> float:
        """max | |xi_minus(-iw)|^2 - |xi_plus(-iw)|^2 - 1 | over probe points."""
        if omegas is None:
            omegas = np.logspace(-2, 2, 11)
        s = -1j * np.asarray(omegas)
        vals = (np.abs(self.xi_minus(s)) ** 2
                - np.abs(self.xi_plus(s)) ** 2 - 1.0)
        vals = vals[np.isfinite(vals)]
        if vals.size == 0:
            return np.inf
        return float(np.abs(vals).max())


@dataclass(frozen=True)
class CascadeFactor:
    """One-mode cascade building block.

    Parameters x = c^2/2 > 0, theta = Omega_minus, y = sqrt(|Omega_plus|^2
    - theta^2) (real or purely imaginary) and the phase phi.  The factor's
    transfer pair is

        xi_minus(s) = (s^2 - x^2 - y^2 + 2 i x theta) / d(s)
        xi_plus(s)  = -2 i x e^{i phi} sqrt(y^2 + theta^2) / d(s)

    with d(s) = (s + x + y)(s + x - y).
    """

    x: float
    y: complex
    theta: float
    phi: float

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError("x must be positive")
        y = complex(self.y)
        if min(abs(y.real), abs(y.imag)) > 1e-9 * max(1.0, abs(y)):
            raise ValueError("y must be real or purely imaginary")
        if (y ** 2 + self.theta ** 2).real < -1e-12:
            raise ValueError(
                "imaginary y must satisfy |y| <= |theta| (y^2 + theta^2 >= 0)")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def poles(self) -> np.ndarray:
        return np.array([-self.x - self.y, -self.x + self.y])

    @property
    def ham_plus_magnitude(self) -> float:
        return float(np.sqrt(max((self.y ** 2 + self.theta ** 2).real, 0.0)))

    def xi_pair(self) -> tuple[RationalFn, RationalFn]:
        x, y, th = self.x, self.y, self.theta
        num_roots = np.sqrt(complex(x ** 2 + y ** 2 - 2j * x * th))
        xm = RationalFn([num_roots, -num_roots], self.poles, 1.0)
        mag = self.ham_plus_magnitude
        if mag <= 1e-14:
            return xm, RationalFn.zero()
        gain = -2j * x * np.exp(1j * self.phi) * mag
        return xm, RationalFn(np.zeros(0, complex), self.poles, gain)

    def transfer(self) -> TransferFunctionSISO:
        xm, xp = self.xi_pair()
        return TransferFunctionSISO(xm, xp)


def eval_transfer(sys: QlsSystem, s: complex,
                  tol: float = DEFAULT_TOL) -> np.ndarray:
    """Evaluate Xi(s) = (1 - C (s - A)^(-1) C^flat) S as a 2m x 2m array."""
    m = sys.n_channels
    n = sys.n_modes
    smat = sys.scattering_or_identity().to_array()
    if n == 0:
        return smat
    a = drift(sys).to_array()
    evals = np.linalg.eigvals(a)
    if np.abs(s - evals).min() <= 1e-10 * (1.0 + abs(s)):
        raise PoleHit(f"s = {s} is within tolerance of a drift eigenvalue")
    c = sys.coupling.to_array()
    cf = sys.coupling.flat().to_array()
    core = np.eye(2 * m) - c @ np.linalg.solve(
        s * np.eye(2 * n) - a, cf)
    return core @ smat


def _residue_pair(sys: QlsSystem):
    """Eigen-decomposition residues of C (s-A)^{-1} C^flat, entries (1,1), (1,2)."""
    a = drift(sys).to_array()
    evals, vecs = np.linalg.eig(a)
    n2 = len(evals)
    for i in range(n2):
        for j in range(i + 1, n2):
            if abs(evals[i] - evals[j]) <= 1e-7 * max(1.0, abs(evals[i])):
                raise DegenerateSpectrum(
                    f"drift eigenvalues collide near {evals[i]:.6g}")
    c = sys.coupling.to_array()
    cf = sys.coupling.flat().to_array()
    left = c @ vecs               # 2m x 2n
    right = np.linalg.solve(vecs, cf)   # 2n x 2m
    res_minus = left[0, :] * right[:, 0]
    res_plus = left[0, :] * right[:, 1]
    return evals, res_minus, res_plus


def tf_rational(sys: QlsSystem, tol: float = DEFAULT_TOL) -> TransferFunctionSISO:
    """Exact rational transfer function of a Hurwitz SISO system.

    Passive systems use the determinant formula (all-pass with zeros at the
    mirrored drift eigenvalues); active systems go through the residues of
    the resolvent, which requires distinct drift eigenvalues.
    """
    if sys.n_channels != 1:
        raise ShapeMismatch("tf_rational requires a single channel")
    if sys.scattering is not None and np.abs(
            sys.scattering.to_array() - np.eye(2)).max() > 1e-10:
        raise ShapeMismatch("tf_rational requires trivial scattering")
    if sys.n_modes == 0:
        return TransferFunctionSISO.trivial()
    if not is_hurwitz(sys):
        raise NotHurwitz("transfer function extraction requires stability")

    if is_passive(sys):
        a_minus = (-1j * sys.ham_minus
                   - 0.5 * sys.coupling_minus.conj().T @ sys.coupling_minus)
        poles = np.linalg.eigvals(a_minus)
        xm = RationalFn(-poles.conj(), poles, 1.0)
        return TransferFunctionSISO(xm, RationalFn.zero())

    evals, res_minus, res_plus = _residue_pair(sys)
    den = np.poly(evals)
    num_minus = den.astype(complex).copy()
    num_plus = np.zeros(len(evals), dtype=complex)
    for i, lam in enumerate(evals):
        cof = np.poly(np.delete(evals, i))
        num_minus = np.polyadd(num_minus, -res_minus[i] * cof)
        num_plus = np.polyadd(num_plus, -res_plus[i] * cof)
    # clustered eigenvalues inflate the residues; cancellation noise in the
    # leading coefficients then sits well above machine precision
    xm = RationalFn.from_poly(num_minus, den, trim=1e-9)
    xp = RationalFn.from_poly(num_plus, den, trim=1e-9)
    # the monic gain picks up rounding; snap it back
    if abs(xm.gain - 1.0) > 1e-6:
        raise QlsError(f"xi_minus gain {xm.gain} far from monic")
    xm = RationalFn(xm.zeros, xm.poles, 1.0)
    return TransferFunctionSISO(xm, xp)


def conjugate_transfer(tf: TransferFunctionSISO,
                       s: DoubledUpMatrix) -> TransferFunctionSISO:
    """S Xi(.) S^flat for a constant 2x2 symplectic S, in rational arithmetic.

    Useful for moving a transfer function between the squeezed-input frame
    and the vacuum basis; the conjugated pair is again monic/proper.
    """
    if s.half_rows != 1 or s.half_cols != 1:
        raise ShapeMismatch("constant conjugation is defined for one channel")
    sf = s.flat()
    a, b = complex(s.upper_left[0, 0]), complex(s.upper_right[0, 0])
    af, bf = complex(sf.upper_left[0, 0]), complex(sf.upper_right[0, 0])
    xm, xp = tf.xi_minus, tf.xi_plus
    xm_c, xp_c = xm.conj_arg(), xp.conj_arg()
    row1 = (a * xm + b * xp_c, a * xp + b * xm_c)
    new_minus = row1[0] * af + row1[1] * np.conj(bf)
    new_plus = row1[0] * bf + row1[1] * np.conj(af)
    if abs(new_minus.gain - 1.0) > 1e-6:
        raise QlsError(f"conjugated xi_minus gain {new_minus.gain} not monic")
    new_minus = RationalFn(new_minus.zeros, new_minus.poles, 1.0)
    return TransferFunctionSISO(new_minus, new_plus)


def cascade_factors(factors) -> TransferFunctionSISO:
    """Transfer function of a cascade of one-mode factors (first entry acts
    first); the 2x2 doubled-up matrices multiply in series order.

    The shared denominator has conjugation-closed roots, hence real
    coefficients, so the matrix product is accumulated exactly as numerator
    polynomials over the explicit pole list.
    """
    num_minus = np.array([1.0 + 0j])
    num_plus = np.array([0.0 + 0j])
    pole_list: list[complex] = []
    for f in factors:
        x, y, th = f.x, f.y, f.theta
        nf_minus = np.array([1.0, 0.0, -(x ** 2 + y ** 2) + 2j * x * th])
        mag = f.ham_plus_magnitude
        nf_plus = np.array([-2j * x * np.exp(1j * f.phi) * mag]) \
            if mag > 1e-14 else np.array([0.0 + 0j])
        # entries (2,1)/(2,2) of the accumulated matrix are the conj-arg
        # reflections; over a real-coefficient denominator these are just
        # the conjugated numerators
        new_minus = np.polyadd(np.polymul(nf_minus, num_minus),
                               np.polymul(nf_plus, num_plus.conj()))
        new_plus = np.polyadd(np.polymul(nf_minus, num_plus),
                              np.polymul(nf_plus, num_minus.conj()))
        num_minus, num_plus = new_minus, new_plus
        pole_list.extend(f.poles)
    poles = np.asarray(pole_list, dtype=complex)
    zeros_minus = np.roots(num_minus) if num_minus.size > 1 else \
        np.zeros(0, complex)
    xm = RationalFn(zeros_minus, poles, 1.0)
    num_plus = _trim_leading(num_plus, 1e-12)
    if num_plus.size == 0 or np.abs(num_plus).max() < 1e-14:
        return TransferFunctionSISO(xm, RationalFn.zero())
    zeros_plus = np.roots(num_plus) if num_plus.size > 1 else \
        np.zeros(0, complex)
    xp = RationalFn(zeros_plus, poles, num_plus[0])
    return TransferFunctionSISO(xm, xp)


def factor_to_system(f: CascadeFactor) -> QlsSystem:
    """One-mode system whose transfer function is the factor's xi pair.

    The coupling is real passive, c = sqrt(2x); the hamiltonian parameters
    are Omega_minus = theta and Omega_plus = -e^{i phi} sqrt(y^2 + theta^2)
    (the sign makes the drift conventions reproduce the stated xi_plus).
    """
    c = np.sqrt(2.0 * f.x)
    om_plus = -np.exp(1j * f.phi) * f.ham_plus_magnitude
    return QlsSystem.one_mode(c, 0.0, f.theta, om_plus)


def system_to_factor(sys: QlsSystem) -> CascadeFactor:
    """Inverse of factor_to_system for a one-mode, passively coupled system."""
    if sys.n_modes != 1 or sys.n_channels != 1:
        raise ShapeMismatch("cascade factors are one-mode SISO")
    if np.abs(sys.coupling_plus).max() > 1e-9:
        raise NotPassive("cascade factor requires passive coupling")
    c = complex(sys.coupling_minus[0, 0])
    if abs(c.imag) > 1e-9 * max(1.0, abs(c)):
        raise ValueError("cascade factor requires a real coupling")
    x = 0.5 * c.real ** 2
    theta = float(sys.ham_minus[0, 0].real)
    om_plus = complex(sys.ham_plus[0, 0])
    y2 = abs(om_plus) ** 2 - theta ** 2
    y = np.sqrt(y2) if y2 >= 0 else 1j * np.sqrt(-y2)
    phi = float(np.angle(-om_plus)) if abs(om_plus) > 0 else 0.0
    return CascadeFactor(x, y, theta, phi)


def passive_cascade(tf: TransferFunctionSISO,
                    tol: float = DEFAULT_TOL) -> list[QlsSystem]:
    """Realize a passive (all-pass) transfer function as a cavity cascade.

    Each pole z contributes a cavity with 1/2 c^2 = -Re z and Omega = -Im z.
    """
    if not tf.is_passive:
        raise NotPassive("cascade synthesis needs xi_plus identically zero")
    poles = tf.xi_minus.zeros * 0  # placeholder to keep dtype
    poles = tf.xi_minus.poles
    if poles.size and poles.real.max() >= 0:
        raise NotHurwitz("all poles must lie in the open left half-plane")
    expected = -poles.conj()
    got = sorted(tf.xi_minus.zeros, key=lambda z: (z.real, z.imag))
    want = sorted(expected, key=lambda z: (z.real, z.imag))
    if not all(abs(a - b) <= 1e-7 * max(1.0, abs(b))
               for a, b in zip(got, want)):
        raise NotPassive("zeros are not the mirrored poles (not all-pass)")
    out = []
    for z in poles:
        c = np.sqrt(-2.0 * z.real)
        out.append(QlsSystem.passive([[c]], [[-z.imag]]))
    return out


def _tf_pole_multiset(tf: TransferFunctionSISO) -> np.ndarray:
    """Pole multiset of the full 2x2 matrix function.

    The four entries have pole sets P-, P+, P-# and P+#; each location
    enters with the maximum multiplicity over the entries.
    """
    entry_sets = [np.asarray(s, dtype=complex)
                  for s in (tf.xi_minus.poles, tf.xi_plus.poles,
                            tf.xi_minus.poles.conj(), tf.xi_plus.poles.conj())]
    centers: list[complex] = []
    for pset in entry_sets:
        for p in pset:
            if not any(abs(p - q) <= 1e-8 * max(1.0, abs(q))
                       for q in centers):
                centers.append(complex(p))
    expanded = []
    for q in centers:
        tol = 1e-8 * max(1.0, abs(q))
        mult = max(int(np.sum(np.abs(pset - q) <= tol)) if pset.size else 0
                   for pset in entry_sets)
        expanded.extend([q] * mult)
    return np.asarray(expanded, dtype=complex)


def gilbert_realization(tf: TransferFunctionSISO,
                        rank_tol: float = 1e-7) -> StateSpace:
    """Minimal diagonal doubled-up realization from partial fractions.

    Requires 2n distinct poles, none real.  The poles are grouped into
    conjugate pairs (lam_i, lam_i#); each residue matrix of the 2x2 transfer
    matrix is rank one, P_i = C_i B_i, and the mirror blocks are fixed as
    B'_i = B_i# Sigma, C'_i = Sigma C_i#.
    """
    poles = _tf_pole_multiset(tf)
    if poles.size == 0:
        n0 = DoubledUpMatrix.zeros(0, 0)
        return StateSpace(n0, DoubledUpMatrix.zeros(0, 1),
                          DoubledUpMatrix.zeros(1, 0),
                          DoubledUpMatrix.identity(1))
    scale = np.abs(poles).max()
    for p in poles:
        if abs(p.imag) <= 1e-7 * max(1.0, scale):
            raise RealPole(f"pole {p:.6g} has (numerically) zero imaginary part")
    for i in range(len(poles)):
        for j in range(i + 1, len(poles)):
            if abs(poles[i] - poles[j]) <= 1e-7 * max(1.0, scale):
                raise RepeatedPole(f"repeated pole near {poles[i]:.6g}")

    upper = [p for p in poles if p.imag > 0]
    lower = [p for p in poles if p.imag < 0]
    reps = []
    lower_left = list(lower)
    for p in upper:
        match = [i for i, q in enumerate(lower_left)
                 if abs(np.conj(p) - q) <= 1e-8 * max(1.0, scale)]
        if not match:
            raise RepeatedPole(f"pole {p:.6g} lacks a conjugate partner")
        lower_left.pop(match[0])
        reps.append(p)
    if lower_left:
        raise RepeatedPole("pole multiset is not closed under conjugation")

    def residue(fn: RationalFn, pole: complex) -> complex:
        if fn.is_zero:
            return 0.0
        num = fn.gain
        for z in fn.zeros:
            num *= (pole - z)
        den = 1.0
        found = False
        for p in fn.poles:
            if not found and abs(p - pole) <= 1e-8 * max(1.0, abs(pole)):
                found = True
                continue
            den *= (pole - p)
        return num / den if found else 0.0

    b_rows, c_cols = [], []
    sig = sigma_swap(1)
    for lam in reps:
        r11 = residue(tf.xi_minus, lam)
        r12 = residue(tf.xi_plus, lam)
        r21 = np.conj(residue(tf.xi_plus, np.conj(lam)))
        r22 = np.conj(residue(tf.xi_minus, np.conj(lam)))
        p_mat = np.array([[r11, r12], [r21, r22]])
        u, s, vh = np.linalg.svd(p_mat)
        if s[0] == 0:
            raise ResidueRankExceedsOne(f"zero residue at pole {lam:.6g}")
        if s[1] > rank_tol * s[0]:
            raise ResidueRankExceedsOne(
                f"residue at {lam:.6g} has rank 2 (s2/s1 = {s[1]/s[0]:.2e})")
        c_i = u[:, :1] * np.sqrt(s[0])
        b_i = vh[:1, :] * np.sqrt(s[0])
        b_rows.append(b_i)
        c_cols.append(c_i)

    n = len(reps)
    a0 = np.diag(np.concatenate([reps, np.conj(reps)]))
    b0 = np.vstack([np.vstack(b_rows),
                    np.vstack([b.conj() @ sig for b in b_rows])])
    c0 = np.hstack([np.hstack(c_cols),
                    np.hstack([sig @ c.conj() for c in c_cols])])
    return StateSpace(DoubledUpMatrix.from_array(a0, tol=1e-9),
                      DoubledUpMatrix.from_array(b0, tol=1e-9),
                      DoubledUpMatrix.from_array(c0, tol=1e-9),
                      DoubledUpMatrix.identity(1))


def state_space_transfer_at(ss: StateSpace, s: complex) -> np.ndarray:
    """Evaluate 1 + C0 (s - A0)^(-1) B0 for a (possibly non-physical) realization."""
    n = ss.A.half_rows
    m = ss.D.half_rows
    if n == 0:
        return np.eye(2 * m, dtype=complex)
    a = ss.A.to_array()
    return (np.eye(2 * m)
            + ss.C.to_array() @ np.linalg.solve(
                s * np.eye(2 * n) - a, ss.B.to_array()))
