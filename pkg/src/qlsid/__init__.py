"""qlsid: modelling, spectral analysis and identification of SISO quantum
linear systems."""

__version__ = "0.1.0"

from .canonical import (SqueezeFactor, SymplecticEigenData, WilliamsonResult,
                        symplectic_canonical_form, symplectic_square_root,
                        williamson)
from .doubled import (DoubledUpMatrix, delta, flat, is_flat_unitary,
                      is_symplectic, j_matrix, sigma_swap, solve_lyapunov)
from .identify import (EntangledSpectrumBlocks, ZeroAssignment, components_of,
                       entangled_identify, entangled_spectrum_blocks,
                       fit_rational_from_samples, has_hidden_passive_factor,
                       real_zero_counts, reconstruct_tf, spectrum_components)
from .rational import RationalFn
from .realization import (PhysicalizationTrace, equivalence_check,
                          physicalize, solve_realization_gram)
from .stationary import (GlobalMinimalityReport, PowerSpectrumSISO,
                         StationaryState, global_minimality,
                         input_basis_change, passive_global_minimality,
                         power_spectrum_eval, stationary_covariance,
                         vacuum_basis)
from .systems import (GaussianInput, QlsSystem, StateSpace, apply_symplectic,
                      controllability_matrix, drift, drift_blocks, is_hurwitz,
                      is_minimal, is_passive, is_physically_realizable,
                      observability_matrix, one_mode_hurwitz_closed_form,
                      series_product, state_space)
from .transfer import (CascadeFactor, TransferFunctionSISO, cascade_factors,
                       conjugate_transfer, eval_transfer, factor_to_system,
                       gilbert_realization, passive_cascade,
                       state_space_transfer_at, system_to_factor, tf_rational)

__all__ = [
    "CascadeFactor", "DoubledUpMatrix", "EntangledSpectrumBlocks",
    "GaussianInput", "GlobalMinimalityReport", "PhysicalizationTrace",
    "PowerSpectrumSISO", "QlsSystem", "RationalFn", "SqueezeFactor",
    "StateSpace", "StationaryState", "SymplecticEigenData",
    "TransferFunctionSISO", "WilliamsonResult", "ZeroAssignment",
    "apply_symplectic", "cascade_factors", "components_of",
    "conjugate_transfer", "state_space_transfer_at",
    "controllability_matrix", "delta", "drift", "drift_blocks",
    "entangled_identify", "entangled_spectrum_blocks", "equivalence_check",
    "eval_transfer", "factor_to_system", "fit_rational_from_samples", "flat",
    "gilbert_realization", "global_minimality", "has_hidden_passive_factor",
    "input_basis_change", "is_flat_unitary", "is_hurwitz", "is_minimal",
    "is_passive", "is_physically_realizable", "is_symplectic", "j_matrix",
    "observability_matrix", "one_mode_hurwitz_closed_form", "passive_cascade",
    "passive_global_minimality", "physicalize", "power_spectrum_eval",
    "real_zero_counts", "reconstruct_tf", "series_product", "sigma_swap",
    "solve_lyapunov", "solve_realization_gram", "spectrum_components",
    "state_space", "stationary_covariance", "symplectic_canonical_form",
    "symplectic_square_root", "system_to_factor", "tf_rational",
    "vacuum_basis", "williamson",
]
