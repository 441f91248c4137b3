"""Doubled-up complex linear algebra.

A doubled-up matrix is the 2n x 2m block matrix

    [A  B ]
    [B# A#]

acting on stacked annihilation/creation coordinates, where ``#`` is the
entrywise complex conjugate.  The flat involution ``Z -> J Z^dag J`` plays
the role of the adjoint; flat-unitary doubled-up matrices are symplectic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NotDoubledUp, NotHurwitz, ShapeMismatch

DEFAULT_TOL = 1e-8


def as_cmatrix(x) -> np.ndarray:
    """Coerce to a 2-D complex ndarray and require finite entries."""
    a = np.atleast_2d(np.asarray(x, dtype=complex))
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def j_matrix(n: int) -> np.ndarray:
    """diag(1_n, -1_n)."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)])).astype(complex)


def sigma_swap(n: int) -> np.ndarray:
    """Block swap [0 1; 1 0] of half size n."""
    z = np.zeros((n, n))
    i = np.eye(n)
    return np.block([[z, i], [i, z]]).astype(complex)


def flat_raw(z: np.ndarray) -> np.ndarray:
    """J_m Z^dag J_n for a raw 2n x 2m array."""
    z = as_cmatrix(z)
    n2, m2 = z.shape
    if n2 % 2 or m2 % 2:
        raise ShapeMismatch("flat needs even dimensions")
    return j_matrix(m2 // 2) @ z.conj().T @ j_matrix(n2 // 2)


@dataclass(frozen=True)
class DoubledUpMatrix:
    """Structural carrier of Delta(A, B) = [A, B; B#, A#]."""

    upper_left: np.ndarray
    upper_right: np.ndarray

    def __post_init__(self):
        a = as_cmatrix(self.upper_left)
        b = as_cmatrix(self.upper_right)
        if a.shape != b.shape:
            raise ShapeMismatch(f"block shapes differ: {a.shape} vs {b.shape}")
        object.__setattr__(self, "upper_left", a)
        object.__setattr__(self, "upper_right", b)

    @property
    def half_rows(self) -> int:
        return self.upper_left.shape[0]

    @property
    def half_cols(self) -> int:
        return self.upper_left.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.half_rows, 2 * self.half_cols)

    def to_array(self) -> np.ndarray:
        """Materialize the full 2n x 2m array."""
        a, b = self.upper_left, self.upper_right
        n, m = a.shape
        out = np.empty((2 * n, 2 * m), dtype=complex)
        out[:n, :m] = a
        out[:n, m:] = b
        out[n:, :m] = b.conj()
        out[n:, m:] = a.conj()
        return out

    @classmethod
    def from_array(cls, z, tol: float = DEFAULT_TOL) -> "DoubledUpMatrix":
        """Split a raw array into blocks, checking the doubled-up symmetry."""
        z = as_cmatrix(z)
        n2, m2 = z.shape
        if n2 % 2 or m2 % 2:
            raise NotDoubledUp(f"odd dimensions {z.shape}")
        n, m = n2 // 2, m2 // 2
        a, b = z[:n, :m], z[:n, m:]
        scale = max(np.abs(z).max(initial=0.0), 1.0)
        res = max(
            np.abs(z[n:, :m] - b.conj()).max(initial=0.0),
            np.abs(z[n:, m:] - a.conj()).max(initial=0.0),
        )
        if res > tol * scale:
            raise NotDoubledUp(f"block symmetry residual {res:.3e}")
        return cls(a, b)

    @classmethod
    def identity(cls, n: int) -> "DoubledUpMatrix":
        return cls(np.eye(n), np.zeros((n, n)))

    @classmethod
    def zeros(cls, n: int, m: int) -> "DoubledUpMatrix":
        return cls(np.zeros((n, m)), np.zeros((n, m)))

    def __matmul__(self, other: "DoubledUpMatrix") -> "DoubledUpMatrix":
        if self.half_cols != other.half_rows:
            raise ShapeMismatch(
                f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.upper_left, self.upper_right
        c, d = other.upper_left, other.upper_right
        return DoubledUpMatrix(a @ c + b @ d.conj(), a @ d + b @ c.conj())

    def __add__(self, other: "DoubledUpMatrix") -> "DoubledUpMatrix":
        return DoubledUpMatrix(self.upper_left + other.upper_left,
                               self.upper_right + other.upper_right)

    def __sub__(self, other: "DoubledUpMatrix") -> "DoubledUpMatrix":
        return DoubledUpMatrix(self.upper_left - other.upper_left,
                               self.upper_right - other.upper_right)

    def scale(self, c: float) -> "DoubledUpMatrix":
        """Multiply by a real scalar (complex scalars break the symmetry)."""
        return DoubledUpMatrix(c * self.upper_left, c * self.upper_right)

    def flat(self) -> "DoubledUpMatrix":
        """J Z^dag J, computed structurally: Delta(A,B) -> Delta(A^dag, -B^T)."""
        return DoubledUpMatrix(self.upper_left.conj().T, -self.upper_right.T)

    def inv(self) -> "DoubledUpMatrix":
        if self.half_rows != self.half_cols:
            raise ShapeMismatch("inverse needs a square matrix")
        if self.half_rows == 0:
            return self
        return DoubledUpMatrix.from_array(np.linalg.inv(self.to_array()),
                                          tol=1e-6)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array())) if self.half_rows else 0.0


def delta(a, b) -> DoubledUpMatrix:
    """Assemble Delta(a, b) = [a, b; b#, a#]."""
    return DoubledUpMatrix(as_cmatrix(a), as_cmatrix(b))


def flat(z: DoubledUpMatrix) -> DoubledUpMatrix:
    return z.flat()


def _coerce_raw(s) -> np.ndarray:
    if isinstance(s, DoubledUpMatrix):
        return s.to_array()
    return as_cmatrix(s)


def is_flat_unitary(s, tol: float = DEFAULT_TOL) -> bool:
    """True iff S^flat S and S S^flat are within tol of the identity."""
    z = _coerce_raw(s)
    if z.shape[0] != z.shape[1]:
        raise ShapeMismatch("flat-unitarity needs a square matrix")
    if z.shape[0] == 0:
        return True
    zf = flat_raw(z)
    eye = np.eye(z.shape[0])
    return (np.abs(zf @ z - eye).max() <= tol
            and np.abs(z @ zf - eye).max() <= tol)


def is_symplectic(s, tol: float = DEFAULT_TOL) -> bool:
    """Flat-unitary AND doubled-up.

    Accepts a DoubledUpMatrix (structure guaranteed by type) or a raw array
    (structure checked numerically).
    """
    if not isinstance(s, DoubledUpMatrix):
        try:
            s = DoubledUpMatrix.from_array(s, tol=tol)
        except NotDoubledUp:
            return False
    if s.half_rows != s.half_cols:
        return False
    return is_flat_unitary(s, tol)


def solve_lyapunov(a, q) -> np.ndarray:
    """Solve a P + P a^dag + q = 0 for Hurwitz a and Hermitian q.

    Reduces to complex Schur form via scipy's Sylvester solver
    (Bartels-Stewart).  The result is explicitly Hermitized.
    """
    a = as_cmatrix(a)
    q = as_cmatrix(q)
    if a.shape[0] != a.shape[1] or a.shape != q.shape:
        raise ShapeMismatch(f"incompatible shapes {a.shape}, {q.shape}")
    if a.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    eigs = np.linalg.eigvals(a)
    if eigs.real.max() >= 0:
        raise NotHurwitz(f"max Re(eig) = {eigs.real.max():.3e}")
    p = scipy.linalg.solve_sylvester(a, a.conj().T, -q)
    return 0.5 * (p + p.conj().T)
