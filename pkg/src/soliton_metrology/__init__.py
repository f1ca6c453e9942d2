"""Variational and quantum-measurement toolkit for coupled matter-wave bright solitons.

Soliton dynamics in a double well, cat/N00N superposition states, parity
detection in a Mach-Zehnder interferometer, and linear/nonlinear phase
estimation, cross-checked against exact Dicke-space simulation.
"""

__version__ = "0.1.0"

from .variational import ALPHA, ModelParams, lambda_param, overlap_I, fit_alpha  # noqa: E402
from .dynamics import VariationalState, conserved_energy, eom_rhs, evolve  # noqa: E402
from .stationary import lambda_critical, set1_solution, set2_solution  # noqa: E402
from .states import SuperpositionSpec, cat_size, overlap_X, theta_noon, to_dicke  # noqa: E402
from .interferometry import mean_parity, phase_sensitivity, variance_parity  # noqa: E402
from .nonlinear import ThetaEstimationSetup, sigma_theta, theta_N_of_Theta  # noqa: E402

__all__ = [
    "ALPHA", "ModelParams", "lambda_param", "overlap_I", "fit_alpha",
    "VariationalState", "conserved_energy", "eom_rhs", "evolve",
    "lambda_critical", "set1_solution", "set2_solution",
    "SuperpositionSpec", "cat_size", "overlap_X", "theta_noon", "to_dicke",
    "mean_parity", "phase_sensitivity", "variance_parity",
    "ThetaEstimationSetup", "sigma_theta", "theta_N_of_Theta",
]
