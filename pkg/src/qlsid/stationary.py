"""Stationary-regime analytics: power spectra and global minimality.

With a stationary Gaussian input of covariance V the output is determined
by the power spectrum Psi_V(s) = Xi(s) V Xi(-s#)^dag.  The stationary
system covariance P solves A P + P A^dag + C^flat V (C^flat)^dag = 0, and
its symplectic (thermal) eigenvalues decide global minimality: the system
is globally minimal for a pure input iff the stationary state is fully
mixed.  Passive systems admit a faster eigenvalue test on the drift block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .canonical import WilliamsonResult, williamson
from .doubled import DEFAULT_TOL, DoubledUpMatrix, solve_lyapunov
from .errors import (NotHurwitz, NotMinimal, NotPassive, NotPure,
                     ShapeMismatch, VacuumInput)
from .rational import RationalFn
from .systems import (GaussianInput, QlsSystem, apply_symplectic, drift,
                      is_hurwitz, is_minimal, is_passive, series_product)
from .transfer import eval_transfer

PURITY_THRESHOLD = 1e-6


@dataclass(frozen=True)
class StationaryState:
    """Stationary covariance with its symplectic diagonalization."""

    P: np.ndarray
    thermal_numbers: list
    S_sys: DoubledUpMatrix

    @property
    def is_fully_mixed(self) -> bool:
        return all(t >= PURITY_THRESHOLD for t in self.thermal_numbers)

    def pure_dim(self, threshold: float = PURITY_THRESHOLD) -> int:
        return int(sum(t < threshold for t in self.thermal_numbers))


@dataclass(frozen=True)
class GlobalMinimalityReport:
    is_globally_minimal: bool
    pure_dim: int
    mixed_dim: int
    pure_part: QlsSystem | None = None
    mixed_part: QlsSystem | None = None
    thermal_numbers: list = field(default_factory=list)
    forced_zero_residuals: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.is_globally_minimal != (self.pure_dim == 0):
            raise ValueError("globally minimal iff pure dimension is zero")


@dataclass(frozen=True)
class PowerSpectrumSISO:
    """Vacuum-basis SISO power spectrum as three rational components.

    phi11 = xi_minus(s) xi_minus(-s#)#, phi12 = xi_minus(s) xi_plus(-s),
    phi22 = xi_plus(s#)# xi_plus(-s); the remaining matrix entry is the
    reflection phi12(-s#)#.
    """

    phi11: RationalFn
    phi12: RationalFn
    phi22: RationalFn

    @property
    def is_trivial(self) -> bool:
        return (self.phi12.is_zero and self.phi22.is_zero
                and len(self.phi11.poles) == 0
                and len(self.phi11.zeros) == 0
                and abs(self.phi11.gain - 1.0) < 1e-9)

    def matrix_at(self, s: complex) -> np.ndarray:
        p21 = self.phi12.reflect_conj()
        return np.array([[complex(self.phi11(s)), complex(self.phi12(s))],
                         [complex(p21(s)), complex(self.phi22(s))]])

    @classmethod
    def trivial(cls) -> "PowerSpectrumSISO":
        return cls(RationalFn.const(1.0), RationalFn.zero(), RationalFn.zero())


def power_spectrum_eval(sys: QlsSystem, v: GaussianInput,
                        s: complex) -> np.ndarray:
    """Psi_V(s) = Xi(s) V Xi(-s#)^dag; Hermitian PSD on the imaginary axis."""
    if v.n_channels != sys.n_channels:
        raise ShapeMismatch("input covariance channel count mismatch")
    left = eval_transfer(sys, s)
    right = eval_transfer(sys, -np.conj(s))
    return left @ v.covariance() @ right.conj().T


def stationary_covariance(sys: QlsSystem, v: GaussianInput) -> StationaryState:
    """Solve the stationary Lyapunov equation and diagonalize the state."""
    if v.n_channels != sys.n_channels:
        raise ShapeMismatch("input covariance channel count mismatch")
    if not is_hurwitz(sys):
        raise NotHurwitz("stationary state requires a Hurwitz system")
    if sys.n_modes == 0:
        return StationaryState(np.zeros((0, 0), complex), [],
                               DoubledUpMatrix.identity(0))
    a = drift(sys).to_array()
    cf = sys.coupling.flat().to_array()
    p = solve_lyapunov(a, cf @ v.covariance() @ cf.conj().T)
    res = williamson(p)
    return StationaryState(p, res.thermal_numbers, res.S_in)


def vacuum_basis(sys: QlsSystem,
                 v: GaussianInput) -> tuple[QlsSystem, GaussianInput]:
    """Rewrite (system, pure input) as (transformed system, vacuum input).

    With V = S0 V_vac S0^dag the transformed coupling is S0^flat C; power
    spectra of the two descriptions are related by congruence with S0.
    """
    if v.n_channels != sys.n_channels:
        raise ShapeMismatch("input covariance channel count mismatch")
    res: WilliamsonResult = williamson(v.covariance())
    if not res.is_pure:
        raise NotPure(f"thermal numbers {res.thermal_numbers} are not all 0")
    c_new = res.S_in @ sys.coupling
    out = QlsSystem(c_new.upper_left, c_new.upper_right,
                    sys.ham_minus, sys.ham_plus, sys.scattering)
    return out, GaussianInput.vacuum(sys.n_channels)


def input_basis_change(v: GaussianInput) -> DoubledUpMatrix:
    """S0 with V = S0 V_vac S0^dag, i.e. the inverse of the Williamson S_in."""
    res = williamson(v.covariance())
    if not res.is_pure:
        raise NotPure("input is not pure")
    return res.S_in.flat()


def global_minimality(sys: QlsSystem, v: GaussianInput,
                      threshold: float = PURITY_THRESHOLD,
                      tol: float = DEFAULT_TOL) -> GlobalMinimalityReport:
    """Decide global minimality and split off the hidden pure component.

    The stationary state's thermal numbers below `threshold` count as pure
    modes.  When pure modes exist the system (seen in the vacuum basis and
    canonical pure-first coordinates) factors as mixed_part <| pure_part with
    a passive pure part; the residuals of the block entries forced to zero
    by that factorization are reported, not discarded.
    """
    if not is_hurwitz(sys):
        raise NotHurwitz("global minimality requires a Hurwitz system")
    if not is_minimal(sys):
        raise NotMinimal("global minimality requires a minimal system")
    vb_sys, vb_in = vacuum_basis(sys, v)   # also enforces purity
    state = stationary_covariance(vb_sys, vb_in)
    pure = state.pure_dim(threshold)
    n = sys.n_modes
    if pure == 0:
        return GlobalMinimalityReport(True, 0, n,
                                      thermal_numbers=state.thermal_numbers)
    canon = apply_symplectic(vb_sys, state.S_sys)
    cm, cp = canon.coupling_minus, canon.coupling_plus
    om, op = canon.ham_minus, canon.ham_plus
    residuals = {
        "coupling_plus_pure": float(np.abs(cp[:, :pure]).max(initial=0.0)),
        "ham_plus_pure_pure": float(np.abs(op[:pure, :pure]).max(initial=0.0)),
    }
    from .systems import drift_blocks
    am, ap = drift_blocks(canon)
    residuals["drift_minus_pure_mixed"] = float(
        np.abs(am[:pure, pure:]).max(initial=0.0))
    residuals["drift_plus_pure_mixed"] = float(
        np.abs(ap[:pure, pure:]).max(initial=0.0))

    pure_part = QlsSystem.passive(cm[:, :pure], om[:pure, :pure])
    mixed_part = QlsSystem(cm[:, pure:], cp[:, pure:],
                           om[pure:, pure:], op[pure:, pure:])
    recon = series_product(mixed_part, pure_part)
    residuals["series_reconstruction"] = float(max(
        np.abs(recon.coupling.to_array()
               - canon.coupling.to_array()).max(initial=0.0),
        np.abs(recon.hamiltonian.to_array()
               - canon.hamiltonian.to_array()).max(initial=0.0)))
    return GlobalMinimalityReport(False, pure, n - pure, pure_part,
                                  mixed_part, state.thermal_numbers,
                                  residuals)


def _conjugate_pair_partition(eigs: np.ndarray, tol: float) -> list[bool]:
    """Flag eigenvalues that are real or matched into conjugate pairs."""
    n = len(eigs)
    scale = max(np.abs(eigs).max(initial=0.0), 1.0)
    hidden = [False] * n
    for i in range(n):
        if abs(eigs[i].imag) <= tol * scale:
            hidden[i] = True
    for i in range(n):
        if hidden[i]:
            continue
        for j in range(n):
            if j == i or hidden[j]:
                continue
            if abs(eigs[j] - np.conj(eigs[i])) <= tol * scale:
                hidden[i] = hidden[j] = True
                break
    return hidden


def passive_global_minimality(sys: QlsSystem, v: GaussianInput,
                              tol: float = DEFAULT_TOL) -> GlobalMinimalityReport:
    """Eigenvalue test for passive systems with squeezed input.

    Globally minimal iff no drift eigenvalue is real and no two form a
    conjugate pair.  The hidden modes are realized as a cascade of one-mode
    cavities with Omega_i = -Im(lambda_i), c_i^2 / 2 = -Re(lambda_i);
    likewise for the visible (mixed) modes.
    """
    if not is_passive(sys):
        raise NotPassive("eigenvalue criterion applies to passive systems")
    if np.abs(v.M).max(initial=0.0) <= 1e-12:
        raise VacuumInput(
            "vacuum input: only zero-mode passive systems are globally minimal")
    if not v.is_pure():
        raise NotPure("passive criterion requires a pure squeezed input")
    if not is_minimal(sys):
        raise NotMinimal("passive criterion requires a minimal system")
    a_minus = (-1j * sys.ham_minus
               - 0.5 * sys.coupling_minus.conj().T @ sys.coupling_minus)
    eigs = np.linalg.eigvals(a_minus)
    if eigs.size and eigs.real.max() >= 0:
        raise NotHurwitz("passive criterion requires a stable system")
    hidden = _conjugate_pair_partition(eigs, max(tol, 1e-8))

    def cavity_cascade(lams):
        sub = None
        for lam in lams:
            cav = QlsSystem.passive([[np.sqrt(-2.0 * lam.real)]],
                                    [[-lam.imag]])
            sub = cav if sub is None else series_product(cav, sub)
        return sub

    pure_lams = [lam for lam, h in zip(eigs, hidden) if h]
    mixed_lams = [lam for lam, h in zip(eigs, hidden) if not h]
    pure_dim = len(pure_lams)
    if pure_dim == 0:
        return GlobalMinimalityReport(True, 0, sys.n_modes)
    mixed_part = cavity_cascade(mixed_lams)
    if mixed_part is None:
        mixed_part = QlsSystem.trivial(1)
    return GlobalMinimalityReport(False, pure_dim, sys.n_modes - pure_dim,
                                  cavity_cascade(pure_lams), mixed_part)
