"""Stationary spectra and the modes a power spectrum cannot see.

A two-mode passive system driven by squeezed noise: scanning a coupling
parameter moves drift eigenvalues on and off the real axis and in and out
of conjugate pairs, which switches individual modes between spectrally
visible (mixed stationary state) and invisible (pure stationary state).
"""

import numpy as np

from qlsid import (GaussianInput, QlsSystem, global_minimality, is_minimal,
                   passive_global_minimality, power_spectrum_eval,
                   stationary_covariance)


def two_mode(x: float) -> QlsSystem:
    return QlsSystem.passive(
        [[0.0, 2.0 * np.sqrt(2.0)]],
        0.5 * np.array([[4.0 + x, 4.0 - x], [4.0 - x, 4.0 + x]]))


squeezed = GaussianInput.squeezed(1.0)

print("== phase scan of the two-mode example ==")
print(f"{'x':>6} {'minimal':>8} {'thermal numbers':>26} {'pure dim':>9}")
for x in (-4.0, -1.0, 0.0, 2.0, 4.0, 8.0):
    sys_ = two_mode(x)
    if not is_minimal(sys_):
        print(f"{x:6.1f} {'no':>8} {'(skipped: not minimal)':>26}")
        continue
    rep = global_minimality(sys_, squeezed)
    nums = ", ".join(f"{t:.4f}" for t in rep.thermal_numbers)
    print(f"{x:6.1f} {'yes':>8} {('[' + nums + ']'):>26} {rep.pure_dim:>9}")

print("\nthe eigenvalue test agrees with the thermal-number test:")
for x in (-4.0, -1.0, 0.0, 8.0):
    a = passive_global_minimality(two_mode(x), squeezed).pure_dim
    b = global_minimality(two_mode(x), squeezed).pure_dim
    print(f"  x = {x:5.1f}: eigenvalue criterion {a}, thermal criterion {b}")

print("\n== the invisible mode drops out of the spectrum ==")
sys_ = two_mode(-1.0)            # one real drift eigenvalue: one hidden mode
rep = passive_global_minimality(sys_, squeezed)
print("mixed part has", rep.mixed_part.n_modes, "mode(s)")
worst = 0.0
for w in np.logspace(-1, 1, 40):
    full = power_spectrum_eval(sys_, squeezed, -1j * w)
    reduced = power_spectrum_eval(rep.mixed_part, squeezed, -1j * w)
    worst = max(worst, np.abs(full - reduced).max())
print(f"two-mode spectrum equals one-mode spectrum to {worst:.2e}")

print("\n== with vacuum input every passive system is invisible ==")
state = stationary_covariance(sys_, GaussianInput.vacuum(1))
print("stationary state thermal numbers:", np.round(state.thermal_numbers, 12))
psi = power_spectrum_eval(sys_, GaussianInput.vacuum(1), -0.8j)
print("spectrum equals the vacuum covariance:",
      np.abs(psi - GaussianInput.vacuum(1).covariance()).max() < 1e-12)
