"""Building quantum linear systems and reading off their transfer functions.

Covers the (S, C, Omega) data model, the drift matrix, stability and
minimality predicates, exact zero-pole-gain transfer functions, cascades of
one-mode factors and the series product.
"""

import numpy as np

from qlsid import (CascadeFactor, QlsSystem, cascade_factors, drift,
                   eval_transfer, factor_to_system, is_hurwitz, is_minimal,
                   is_passive, one_mode_hurwitz_closed_form, series_product,
                   tf_rational)

# ------------------------------------------------------------- one cavity
print("== a one-mode cavity ==")
cavity = QlsSystem.one_mode(np.sqrt(2.0), 0.0, 0.7)
print("drift A =\n", drift(cavity).to_array())
print("passive:", is_passive(cavity), " Hurwitz:", is_hurwitz(cavity),
      " minimal:", is_minimal(cavity))

tf = tf_rational(cavity)
print("xi_minus: zeros", tf.xi_minus.zeros, "poles", tf.xi_minus.poles)
print("on the axis |xi_minus| = 1 (all-pass):",
      abs(abs(tf.xi_minus(-0.9j)) - 1.0) < 1e-12)

# ------------------------------------------------- stability in closed form
print("\n== one-mode stability regions ==")
print("(c-, c+, w-, w+) = (1, 0, 1, 0)   ->",
      one_mode_hurwitz_closed_form(1.0, 0.0, 1.0, 0.0))
print("(c-, c+, w-, w+) = (1, 0, 0, 2)   ->",
      one_mode_hurwitz_closed_form(1.0, 0.0, 0.0, 2.0),
      "(pumping beats damping)")
print("amplifier |c+| > |c-| is minimal but unstable:",
      is_minimal(QlsSystem.one_mode(0.3, 1.0, 0.5, 0.5)),
      is_hurwitz(QlsSystem.one_mode(0.3, 1.0, 0.5, 0.5)))

# -------------------------------------------------------- active cascades
print("\n== an active two-mode cascade ==")
f1 = CascadeFactor(x=0.8, y=0.5, theta=0.3, phi=0.4)
f2 = CascadeFactor(x=1.1, y=0.4j, theta=-0.9, phi=-1.2)
tf = cascade_factors([f1, f2])
print("xi_minus poles:", np.round(tf.xi_minus.poles, 4))
print("xi_plus gain:", np.round(tf.xi_plus.gain, 4))
print("symplectic identity residual on the axis:",
      f"{tf.symplectic_residual():.2e}")

g = series_product(factor_to_system(f2), factor_to_system(f1))
print("\nsame thing as a series product of one-mode systems:")
for w in (0.3, 1.0, 3.0):
    m = eval_transfer(g, -1j * w)
    print(f"  w = {w}:  |xi- match| = "
          f"{abs(m[0, 0] - tf.xi_minus(-1j * w)):.2e},"
          f"  |xi+ match| = {abs(m[0, 1] - tf.xi_plus(-1j * w)):.2e}")

# the transfer function of a cascade is the (ordered) product
lhs = eval_transfer(g, -0.7j)
rhs = eval_transfer(factor_to_system(f2), -0.7j) \
    @ eval_transfer(factor_to_system(f1), -0.7j)
print("cascade transfer = product of factors:",
      np.abs(lhs - rhs).max() < 1e-10)
