"""Small shared helpers for the demo scripts."""

import numpy as np

from qlsid import QlsSystem, drift, is_hurwitz, is_minimal


def random_generic_system(rng, n_modes, active=0.45) -> QlsSystem:
    """Random stable minimal SISO system with distinct, non-real drift
    eigenvalues (so the diagonal realization applies)."""
    while True:
        cm = (rng.standard_normal((1, n_modes))
              + 1j * rng.standard_normal((1, n_modes))) / np.sqrt(2)
        cp = active * (rng.standard_normal((1, n_modes))
                       + 1j * rng.standard_normal((1, n_modes))) / np.sqrt(2)
        h = rng.standard_normal((n_modes, n_modes)) \
            + 1j * rng.standard_normal((n_modes, n_modes))
        om = 0.5 * (h + h.conj().T)
        h2 = active * (rng.standard_normal((n_modes, n_modes))
                       + 1j * rng.standard_normal((n_modes, n_modes)))
        op = 0.5 * (h2 + h2.T)
        sys_ = QlsSystem(cm, cp, om, op)
        if not (is_hurwitz(sys_) and is_minimal(sys_)):
            continue
        ev = np.linalg.eigvals(drift(sys_).to_array())
        scale = max(1.0, np.abs(ev).max())
        if np.abs(ev.imag).min() < 1e-3 * scale:
            continue
        gaps = [abs(ev[i] - ev[j]) for i in range(len(ev))
                for j in range(i + 1, len(ev))]
        if min(gaps) > 1e-3 * scale:
            return sys_
