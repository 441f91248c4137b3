"""Symplectic canonical decompositions.

Two related eigen-problems:

* canonical form of a flat-self-adjoint doubled-up matrix ``script_n = N^flat N``
  (symplectic analogue of the SVD), together with its square-root
  factorization into squeeze parameters;
* Williamson diagonalization of a Gaussian covariance matrix in the
  annihilation/creation convention, yielding symplectic (thermal)
  eigenvalues.

Both build a symplectic basis column by column, normalizing with the
indefinite J-inner product x^dag J y.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .doubled import (DEFAULT_TOL, DoubledUpMatrix, as_cmatrix, flat_raw,
                      j_matrix, sigma_swap)
from .errors import NonSemisimple, NotACovariance, NotDoubledUp

# Pauli matrix appearing in the 2x2 blocks of the canonical form.
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


@dataclass(frozen=True)
class SymplecticEigenData:
    """Canonical form script_n = W nhat W^flat of a flat-self-adjoint matrix.

    ``lambda_plus``/``lambda_minus`` hold the real positive/negative
    eigenvalues (one entry per doubled pair); ``complex_pairs`` holds
    (mu, nu) for each complex eigenvalue mu + i*nu with nu > 0 (each of
    which occupies a 2x2 slot).
    """

    W: DoubledUpMatrix
    lambda_plus: list = field(default_factory=list)
    lambda_minus: list = field(default_factory=list)
    complex_pairs: list = field(default_factory=list)

    @property
    def half_dim(self) -> int:
        return (len(self.lambda_plus) + len(self.lambda_minus)
                + 2 * len(self.complex_pairs))

    def nhat(self) -> DoubledUpMatrix:
        """Assemble the block-diagonal canonical matrix."""
        n = self.half_dim
        n1 = np.zeros((n, n), dtype=complex)
        n2 = np.zeros((n, n), dtype=complex)
        k = 0
        for lam in self.lambda_plus:
            n1[k, k] = lam
            k += 1
        for lam in self.lambda_minus:
            n1[k, k] = lam
            k += 1
        for mu, nu in self.complex_pairs:
            n1[k:k + 2, k:k + 2] = mu * np.eye(2)
            n2[k:k + 2, k:k + 2] = -nu * SIGMA_Y
            k += 2
        return DoubledUpMatrix(n1, n2)


@dataclass(frozen=True)
class SqueezeFactor:
    """Square-root factorization nhat = Nbar^flat Nbar.

    alphas/betas/xs record the cosh/sinh parameters of the complex slots.
    """

    Nbar: DoubledUpMatrix
    alphas: list = field(default_factory=list)
    betas: list = field(default_factory=list)
    xs: list = field(default_factory=list)


@dataclass(frozen=True)
class WilliamsonResult:
    """Symplectic diagonalization S_in V S_in^dag = canonical thermal form."""

    S_in: DoubledUpMatrix
    thermal_numbers: list = field(default_factory=list)

    @property
    def is_pure(self) -> bool:
        return all(n < 1e-6 for n in self.thermal_numbers)

    def canonical_form(self) -> np.ndarray:
        n = np.asarray(self.thermal_numbers, dtype=float)
        return np.diag(np.concatenate([n + 1.0, n])).astype(complex)


def _j_inner(x: np.ndarray, jmat: np.ndarray, y: np.ndarray) -> complex:
    return complex(x.conj() @ (jmat @ y))


def _mirror(v: np.ndarray) -> np.ndarray:
    """Sigma v#: the mirror eigenvector of a doubled-up matrix."""
    n = v.shape[0] // 2
    out = np.empty_like(v)
    out[:n] = v[n:].conj()
    out[n:] = v[:n].conj()
    return out


def _orthonormal_columns(b: np.ndarray, rank: int) -> np.ndarray:
    """Order-preserving orthonormal basis of the column span.

    Modified Gram-Schmidt with a re-orthogonalization pass; keeps leading
    columns first so that already-canonical inputs come out unpermuted.
    """
    cols: list[np.ndarray] = []
    for i in range(b.shape[1]):
        x = b[:, i].copy()
        for _ in range(2):
            for c in cols:
                x = x - c * (c.conj() @ x)
        nrm = np.linalg.norm(x)
        if nrm > 1e-10:
            cols.append(x / nrm)
        if len(cols) == rank:
            break
    if len(cols) < rank:
        raise NonSemisimple("eigenspace basis numerically rank deficient")
    return np.column_stack(cols)


def _cluster(values: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group indices of `values` whose entries agree within tol."""
    order = np.lexsort((values.imag, values.real))
    groups: list[list[int]] = []
    for idx in order:
        if groups and abs(values[idx] - values[groups[-1][0]]) <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return [np.asarray(g) for g in groups]


def _real_slot_vectors(basis: np.ndarray, jmat: np.ndarray,
                       n_slots: int) -> list[np.ndarray]:
    """Extract J-orthonormal slot vectors (J-norm +1) from a real eigenspace.

    The eigenspace of a real eigenvalue is mirror invariant with J-signature
    (k, k); each extracted vector w contributes the pair (w, Sigma w#) and the
    remaining columns are J-projected away from that pair.
    """
    cols = []
    b = _orthonormal_columns(basis, basis.shape[1])
    for i in range(n_slots):
        gram = b.conj().T @ jmat @ b
        gram = 0.5 * (gram + gram.conj().T)
        evals, evecs = np.linalg.eigh(gram)
        if evals[-1] <= 1e-12:
            raise NonSemisimple("J-metric degenerate on a real eigenspace")
        # Prefer the leading basis column when it is J-regular, so that
        # already-diagonal inputs produce W = identity.
        lead = float((b[:, 0].conj() @ jmat @ b[:, 0]).real)
        if abs(lead) >= 0.5 * evals[-1]:
            w = b[:, 0] / np.sqrt(abs(lead))
            if lead < 0:
                w = _mirror(w)
        else:
            w = b @ evecs[:, -1] / np.sqrt(evals[-1])
        cols.append(w)
        wm = _mirror(w)
        b = b - np.outer(w, w.conj() @ jmat @ b) \
              + np.outer(wm, wm.conj() @ jmat @ b)
        remaining = basis.shape[1] - 2 * (i + 1)
        if remaining > 0:
            b = _orthonormal_columns(b, remaining)
    return cols


def _complex_slot_vectors(basis_plus: np.ndarray, jmat: np.ndarray,
                          n_slots: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Extract column pairs (wa, wb) for a complex eigenvalue slot.

    Works in the eigenspace E+ of mu + i*nu using the antisymmetric pairing
    g(x, y) = x^dag (J Sigma) y#; scaling a basis pair to g(p, q) = -2 makes
    the derived columns J-orthonormal.
    """
    n = jmat.shape[0] // 2
    jsig = jmat @ sigma_swap(n)

    def g(x, y):
        return complex(x.conj() @ (jsig @ y.conj()))

    pairs = []
    b = _orthonormal_columns(basis_plus, basis_plus.shape[1])
    for i in range(n_slots):
        v1 = b[:, 0]
        others = [b[:, j] for j in range(1, b.shape[1])]
        if not others:
            raise NonSemisimple("complex eigenspace has odd dimension")
        gs = [abs(g(v1, v)) for v in others]
        jbest = int(np.argmax(gs))
        v2 = others[jbest]
        gamma = g(v1, v2)
        if abs(gamma) <= 1e-12:
            raise NonSemisimple("J-pairing degenerate on a complex eigenspace")
        p = (-2.0 / np.conj(gamma)) * v1
        q = v2
        wa = 0.5 * (p - _mirror(q))
        wb = 0.5 * (_mirror(p) + q)
        pairs.append((wa, wb))
        rest = [v for j, v in enumerate(others) if j != jbest]
        if rest:
            denom = g(p, q)
            deflated = []
            for x in rest:
                beta = np.conj(g(p, x) / denom)
                alpha = np.conj(-g(q, x) / denom)
                deflated.append(x - alpha * p - beta * q)
            b = _orthonormal_columns(np.column_stack(deflated), len(rest))
        elif i != n_slots - 1:
            raise NonSemisimple("complex eigenspace exhausted early")
    return pairs


def symplectic_canonical_form(script_n: DoubledUpMatrix,
                              tol: float = DEFAULT_TOL) -> SymplecticEigenData:
    """Diagonalize script_n = N^flat N as W nhat W^flat with W symplectic.

    Requires all eigenvalues semisimple (generic case); the eigenvalues are
    real (in mirror pairs) or complex with even multiplicity, and are sorted
    into positive, negative and complex slots.
    """
    k = script_n.to_array()
    n = script_n.half_rows
    if script_n.half_cols != n:
        raise NotDoubledUp("canonical form needs a square doubled-up matrix")
    if n == 0:
        return SymplecticEigenData(DoubledUpMatrix.identity(0))
    scale = max(np.abs(k).max(), 1e-300)
    if np.abs(flat_raw(k) - k).max() > max(tol, 1e-7) * scale:
        raise NotDoubledUp("input is not flat-self-adjoint (not of N^flat N form)")

    evals, evecs = np.linalg.eig(k)
    if np.linalg.cond(evecs) > 1e8:
        raise NonSemisimple(
            f"eigenvector condition number {np.linalg.cond(evecs):.3e}")

    jmat = j_matrix(n)
    ctol = max(tol, 1e-8) * max(np.abs(evals).max(), 1.0)
    is_real = np.abs(evals.imag) <= ctol

    lam_plus: list[tuple[float, list]] = []
    lam_minus: list[tuple[float, list]] = []
    cplx: list[tuple[complex, list]] = []

    for group in _cluster(evals[is_real].real + 0j, ctol):
        idx = np.where(is_real)[0][group]
        if len(idx) % 2:
            raise NonSemisimple("real eigenvalue with odd multiplicity")
        lam = float(evals[idx].real.mean())
        vecs = _real_slot_vectors(evecs[:, idx], jmat, len(idx) // 2)
        target = lam_plus if lam > 0 else lam_minus
        for w in vecs:
            target.append((lam, [w]))

    upper = np.where(~is_real & (evals.imag > 0))[0]
    lower = np.where(~is_real & (evals.imag < 0))[0]
    for group in _cluster(evals[upper], ctol):
        idx = upper[group]
        lam = complex(evals[idx].mean())
        partners = [j for j in lower if abs(evals[j] - np.conj(lam)) <= ctol]
        if len(partners) != len(idx) or len(idx) % 2:
            raise NonSemisimple(
                f"complex eigenvalue {lam:.6g} lacks a matching mirror pair")
        for wa, wb in _complex_slot_vectors(evecs[:, idx], jmat, len(idx) // 2):
            cplx.append((lam, [wa, wb]))

    lam_plus.sort(key=lambda t: -t[0])
    lam_minus.sort(key=lambda t: -t[0])
    cplx.sort(key=lambda t: (t[0].real, t[0].imag))

    columns = [w for _, ws in lam_plus + lam_minus + cplx for w in ws]
    upper_block = np.column_stack(columns) if columns else np.zeros((2 * n, 0))
    w_full = np.column_stack([upper_block,
                              np.column_stack([_mirror(c) for c in columns])])
    try:
        w_dup = DoubledUpMatrix.from_array(w_full, tol=1e-6)
    except NotDoubledUp as exc:  # pragma: no cover - construction guarantees it
        raise NonSemisimple(f"assembled basis lost doubled-up structure: {exc}")

    data = SymplecticEigenData(
        W=w_dup,
        lambda_plus=[lam for lam, _ in lam_plus],
        lambda_minus=[lam for lam, _ in lam_minus],
        complex_pairs=[(lam.real, lam.imag) for lam, _ in cplx],
    )
    recon = (w_dup @ data.nhat() @ w_dup.flat()).to_array()
    if np.abs(recon - k).max() > max(tol, 1e-8) * scale:
        raise NonSemisimple(
            f"canonical reconstruction residual {np.abs(recon - k).max():.3e}")
    return data


def symplectic_square_root(nhat: SymplecticEigenData) -> SqueezeFactor:
    """Factor the canonical matrix as nhat = Nbar^flat Nbar.

    Real positive slots get sqrt(lambda) on the diagonal of the first block,
    real negative ones sqrt(|lambda|) in the second block, complex slots the
    cosh/sinh pair (alpha, beta) determined by (mu, nu).
    """
    n = nhat.half_dim
    n1 = np.zeros((n, n), dtype=complex)
    n2 = np.zeros((n, n), dtype=complex)
    alphas, betas, xs = [], [], []
    k = 0
    for lam in nhat.lambda_plus:
        n1[k, k] = np.sqrt(lam)
        k += 1
    for lam in nhat.lambda_minus:
        n2[k, k] = np.sqrt(abs(lam))
        k += 1
    for mu, nu in nhat.complex_pairs:
        if abs(mu) < 1e-14:
            alpha = beta = np.sqrt(nu / 2.0)
            x = np.inf  # degenerate parametrization; alpha = beta directly
        else:
            x = 0.5 * np.arcsinh(nu / abs(mu))
            if mu > 0:
                alpha, beta = np.sqrt(mu) * np.cosh(x), np.sqrt(mu) * np.sinh(x)
            else:
                alpha, beta = np.sqrt(-mu) * np.sinh(x), np.sqrt(-mu) * np.cosh(x)
        n1[k:k + 2, k:k + 2] = alpha * np.eye(2)
        n2[k:k + 2, k:k + 2] = -beta * SIGMA_Y
        alphas.append(float(alpha))
        betas.append(float(beta))
        xs.append(float(x) if np.isfinite(x) else x)
        k += 2
    return SqueezeFactor(DoubledUpMatrix(n1, n2), alphas, betas, xs)


def covariance_structure_residual(v: np.ndarray) -> float:
    """Deviation of a 2m x 2m matrix from the covariance block structure.

    A valid covariance [N^T + 1, M; M^dag, N] is Hermitian and satisfies
    Sigma V# Sigma = V - J.
    """
    v = as_cmatrix(v)
    m = v.shape[0] // 2
    sig, jm = sigma_swap(m), j_matrix(m)
    herm = np.abs(v - v.conj().T).max(initial=0.0)
    struct = np.abs(sig @ v.conj() @ sig - (v - jm)).max(initial=0.0)
    return max(herm, struct)


def williamson(v, tol: float = DEFAULT_TOL) -> WilliamsonResult:
    """Symplectically diagonalize a covariance matrix.

    Returns S_in with S_in V S_in^dag = diag(n_i + 1) (+) diag(n_i) and the
    thermal numbers n_i in ascending order.  The n_i are the moduli of the
    negative branch of eig(J V); purity corresponds to all n_i = 0.
    """
    v = as_cmatrix(v)
    if v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise NotACovariance(f"covariance must be 2m x 2m, got {v.shape}")
    m = v.shape[0] // 2
    if m == 0:
        return WilliamsonResult(DoubledUpMatrix.identity(0), [])
    scale = max(np.abs(v).max(), 1.0)
    if covariance_structure_residual(v) > max(tol, 1e-7) * scale:
        raise NotACovariance("matrix violates the covariance block structure")
    vherm = 0.5 * (v + v.conj().T)
    if np.linalg.eigvalsh(vherm).min() < -max(tol, 1e-7) * scale:
        raise NotACovariance("covariance is not positive semidefinite")

    jmat = j_matrix(m)
    evals, evecs = np.linalg.eig(jmat @ v)
    ctol = max(tol, 1e-8) * max(np.abs(evals).max(), 1.0)
    if np.abs(evals.imag).max() > max(100 * ctol, 1e-6):
        raise NotACovariance("J V has non-real eigenvalues")
    evals = evals.real

    upper = np.where(evals >= 0.5)[0]
    lower = np.where(evals < 0.5)[0]
    if len(upper) != m or len(lower) != m:
        raise NotACovariance("eigenvalues of J V do not split into m pairs")

    slots = []
    for group in _cluster(evals[upper] + 0j, ctol):
        idx = upper[group]
        kappa = float(evals[idx].mean())
        matches = [j for j in lower if abs(evals[j] - (1.0 - kappa)) <= 100 * ctol]
        if len(matches) < len(idx):
            raise NotACovariance(
                f"eigenvalue {kappa:.6g} of J V lacks its 1-kappa partner")
        if kappa - 1.0 < -1e-6:
            raise NotACovariance(f"negative thermal number {kappa - 1.0:.3e}")
        basis = _orthonormal_columns(evecs[:, idx], len(idx))
        gram = basis.conj().T @ jmat @ basis
        gram = 0.5 * (gram + gram.conj().T)
        gvals, gvecs = np.linalg.eigh(gram)
        if gvals.min() <= 1e-12:
            raise NotACovariance("J-metric degenerate on a thermal eigenspace")
        w = basis @ (gvecs @ np.diag(1.0 / np.sqrt(gvals)))
        for col in range(w.shape[1]):
            slots.append((max(kappa - 1.0, 0.0), w[:, col]))

    slots.sort(key=lambda t: t[0])
    cols = np.column_stack([w for _, w in slots])
    u_full = np.column_stack([cols,
                              np.column_stack([_mirror(cols[:, i])
                                               for i in range(m)])])
    u_dup = DoubledUpMatrix.from_array(u_full, tol=1e-6)
    s_in = DoubledUpMatrix.from_array(u_full.conj().T, tol=1e-6)

    result = WilliamsonResult(s_in, [t for t, _ in slots])
    residual = np.abs(s_in.to_array() @ v @ s_in.to_array().conj().T
                      - result.canonical_form()).max()
    if residual > max(tol, 1e-7) * scale * 10:
        raise NotACovariance(
            f"Williamson reconstruction residual {residual:.3e}")
    return result
