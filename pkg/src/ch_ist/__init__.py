"""Camassa-Holm inverse scattering and long-time asymptotics (kappa = 1)."""
from .asymptotics import AsymptoticResult, correction_terms, evaluate, local_coeffs, local_model_row
from .errors import CHError, ConvergenceError, DataValidationError, DomainError
from .pde_oracle import GridSpec, Trajectory, decay_fit, evolve, residual
from .phase import Case, RegionInfo, classify, select_j0, sign_re_i_theta, stationary_points, theta, theta_derivs
from .scattering import InitialDatum, Pole, SpectralData, discrete_spectrum, jost_pair, reflection_coefficient, scatter
from .soliton import SolitonData, invert_x, one_soliton, outer_matrix, q_of_x
from .weightfn import T, T_expansion, delta, local_limit, nu

__version__ = "0.1.0"
