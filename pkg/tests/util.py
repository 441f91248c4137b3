"""Shared random generators and comparison helpers for the test suite."""

import numpy as np
import scipy.linalg

from qlsid import (CascadeFactor, DoubledUpMatrix, GaussianInput, QlsSystem,
                   delta, drift, factor_to_system, is_hurwitz, is_minimal,
                   series_product)


def random_cmatrix(rng, n, m, scale=1.0):
    return scale * (rng.standard_normal((n, m))
                    + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_doubled(rng, n, m, scale=1.0) -> DoubledUpMatrix:
    return delta(random_cmatrix(rng, n, m, scale),
                 random_cmatrix(rng, n, m, scale))


def random_hermitian(rng, n, scale=1.0):
    h = random_cmatrix(rng, n, n, scale)
    return 0.5 * (h + h.conj().T)


def random_symmetric(rng, n, scale=1.0):
    h = random_cmatrix(rng, n, n, scale)
    return 0.5 * (h + h.T)


def random_symplectic(rng, n, scale=0.4) -> DoubledUpMatrix:
    """exp of a random element of the symplectic Lie algebra."""
    x1 = 1j * random_hermitian(rng, n, scale)
    x2 = random_symmetric(rng, n, scale)
    return DoubledUpMatrix.from_array(
        scipy.linalg.expm(delta(x1, x2).to_array()), tol=1e-6)


def random_system(rng, n, m=1, active=0.45) -> QlsSystem:
    return QlsSystem(random_cmatrix(rng, m, n),
                     random_cmatrix(rng, m, n, active),
                     random_hermitian(rng, n),
                     random_symmetric(rng, n, active))


def random_hurwitz(rng, n, m=1, active=0.45) -> QlsSystem:
    while True:
        s = random_system(rng, n, m, active)
        if is_hurwitz(s):
            return s


def diagonal_realizable(sys: QlsSystem, margin=1e-3) -> bool:
    """Distinct, non-real drift eigenvalues (diagonal-realization gates)."""
    ev = np.linalg.eigvals(drift(sys).to_array())
    scale = max(1.0, np.abs(ev).max())
    if np.abs(ev.imag).min() < margin * scale:
        return False
    for i in range(len(ev)):
        for j in range(i + 1, len(ev)):
            if abs(ev[i] - ev[j]) < margin * scale:
                return False
    return True


def random_generic_hurwitz(rng, n, m=1, active=0.45) -> QlsSystem:
    while True:
        s = random_hurwitz(rng, n, m, active)
        if diagonal_realizable(s) and is_minimal(s):
            return s


def random_factor(rng, sharp=False) -> CascadeFactor:
    if sharp:
        x = rng.uniform(0.05, 0.25)
        th = rng.uniform(0.5, 1.5) * (1 if rng.random() < 0.5 else -1)
        y = 1j * rng.uniform(0.3, 0.9) * abs(th)
    else:
        x = rng.uniform(0.3, 2.0)
        th = rng.uniform(-1.5, 1.5)
        if rng.random() < 0.5:
            y = rng.uniform(0.05, 0.95) * x
        else:
            y = 1j * rng.uniform(0.05, 0.95) * abs(th)
    return CascadeFactor(x, y, th, rng.uniform(-np.pi, np.pi))


def random_cascade(rng, n, sharp=False) -> QlsSystem:
    systems = [factor_to_system(random_factor(rng, sharp)) for _ in range(n)]
    g = systems[0]
    for nxt in systems[1:]:
        g = series_product(nxt, g)
    return g


def random_pure_input(rng) -> GaussianInput:
    return GaussianInput.squeezed(rng.uniform(0.1, 1.2),
                                  rng.uniform(0, 2 * np.pi))


def grid_omegas(k=50, lo=-2, hi=2):
    return np.logspace(lo, hi, k)


def tf_values_close(tf1, tf2, omegas, tol) -> float:
    """Max pointwise deviation of two transfer pairs on the imaginary axis."""
    worst = 0.0
    for w in omegas:
        s0 = -1j * w
        worst = max(worst,
                    abs(tf1.xi_minus(s0) - tf2.xi_minus(s0)),
                    abs(tf1.xi_plus(s0) - tf2.xi_plus(s0)))
    return worst


def roots_close(a, b, tol) -> bool:
    """Greedy multiset matching of complex roots within tolerance."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False
    for x in a:
        if not b:
            return False
        i = int(np.argmin([abs(x - y) for y in b]))
        if abs(x - b[i]) > tol * max(1.0, abs(x)):
            return False
        b.pop(i)
    return True
