"""Doubled-up matrices, the flat involution and symplectic factorizations.

A walk through the linear-algebra layer: the Delta(A, B) block structure,
the flat map Z -> J Z^dag J that plays the role of the adjoint, the
symplectic canonical form of N^flat N, and Williamson diagonalization of
Gaussian covariance matrices.
"""

import numpy as np

from qlsid import (GaussianInput, delta, flat, is_flat_unitary,
                   is_symplectic, symplectic_canonical_form,
                   symplectic_square_root, williamson)

rng = np.random.default_rng(7)

# ---------------------------------------------------------------- basics
print("== doubled-up basics ==")
z = delta([[1.0]], [[2.0j]])
print("Delta(1, 2i) =\n", z.to_array())
print("flat(Delta(1, 2i)) =\n", flat(z).to_array())
print("flat is an involution:", np.allclose(flat(flat(z)).to_array(),
                                            z.to_array()))

r = 0.6
squeeze = delta([[np.cosh(r)]], [[np.sinh(r)]])
print("\nA squeeze Delta(cosh r, sinh r) is symplectic:",
      is_symplectic(squeeze))
print("J itself is flat-unitary but not doubled-up, hence not symplectic:",
      is_flat_unitary(np.diag([1.0, -1.0])),
      is_symplectic(np.diag([1.0, -1.0])))

# ------------------------------------------- canonical form of N^flat N
print("\n== symplectic canonical form ==")
n = 3
big_n = delta(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
              rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
script_n = flat(big_n) @ big_n
data = symplectic_canonical_form(script_n)
print("eigenvalue slots: positive", np.round(data.lambda_plus, 4),
      "negative", np.round(data.lambda_minus, 4),
      "complex", [(round(m, 4), round(v, 4)) for m, v in data.complex_pairs])
recon = (data.W @ data.nhat() @ flat(data.W)).to_array()
print("reconstruction residual:",
      f"{np.abs(recon - script_n.to_array()).max():.2e}")

sq = symplectic_square_root(data)
factored = (flat(sq.Nbar) @ sq.Nbar - data.nhat()).to_array()
print("square-root factorization residual:", f"{np.abs(factored).max():.2e}")

# ------------------------------------------------ Williamson diagonalization
print("\n== Williamson diagonalization ==")
squeezed = GaussianInput.squeezed(1.0)       # N = 1, M = sqrt(2): pure
res = williamson(squeezed.covariance())
print("pure squeezed input, thermal numbers:",
      np.round(res.thermal_numbers, 12))

thermal = GaussianInput([[1.0]], [[0.0]])
res = williamson(thermal.covariance())
print("thermal input N = 1, thermal numbers:", res.thermal_numbers)
print("S_in V S_in^dag =\n",
      np.round(res.S_in.to_array() @ thermal.covariance()
               @ res.S_in.to_array().conj().T, 10).real)
