"""Uncertainty relations for quantum angular momentum at arbitrary spin."""
from .asymptotics import fit_c2_scaling, scaled_variances, truncate_to_spin
from .entropic import entropy_pair, mu_bound, mu_constant, output_entropy, psi_alpha_state
from .measurement import (
    CovariantMeasurementSpec,
    brute_force_optimum,
    calibration_error,
    optimal_measurement,
    optimal_spec,
    wasserstein_1d,
)
from .prep_region import c2_bound, min_weighted_variance, power_mean_bound, trace_region, vnorm_p
from .robertson import generalized_robertson_eigen, hexagon_variance_slack, schrodinger_matrix
from .spin_core import (
    MomentData,
    QuantumState,
    SpinContext,
    coherent_state,
    make_spin_context,
    moments,
    random_states,
    rotation_operator,
    variance,
    wigner_small_d,
)
from .vector_model import moment_feasible, quantum_moments

__version__ = "0.1.0"

__all__ = [
    "CovariantMeasurementSpec", "MomentData", "QuantumState", "SpinContext",
    "brute_force_optimum", "c2_bound", "calibration_error", "coherent_state", "entropy_pair",
    "fit_c2_scaling", "generalized_robertson_eigen", "hexagon_variance_slack", "make_spin_context",
    "min_weighted_variance", "moment_feasible", "moments", "mu_bound", "mu_constant",
    "optimal_measurement", "optimal_spec", "output_entropy", "power_mean_bound", "psi_alpha_state",
    "quantum_moments", "random_states", "rotation_operator", "scaled_variances", "schrodinger_matrix",
    "trace_region", "truncate_to_spin", "variance", "vnorm_p", "wasserstein_1d", "wigner_small_d",
]
