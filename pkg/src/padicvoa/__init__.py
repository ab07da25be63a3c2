"""Exact and p-adic computations in the rank-one Heisenberg vertex algebra."""

__version__ = "0.1.0"

from .scalar import INF, NormValue, NotCauchy, WeightX, padic_valuation, weight_distance, weight_limit
from .fock import FockState, RExponent, basis, r_norm, sup_norm
from .modes import apply_h, apply_L, jacobi_check, mode_product, omega, zero_mode_matrix
from .brackets import apply_h_bracket, apply_L0_bracket, apply_Lm1_bracket, bracket_coeffs, bracket_lift
from .modforms import KummerChain, QSeries, bernoulli, eisenstein, eisenstein_star, quasimodular_fit
from .onepoint import graded_check, one_point, z_function, z_limit
from .spectral import PadicTarget, cauchy_verify, eigen_residual, resolvent_apply, resolvent_norm_profile
from .expr import format_state, parse_state
from .kernels import BACKEND

__all__ = [
    "__version__",
    "INF",
    "NormValue",
    "NotCauchy",
    "WeightX",
    "padic_valuation",
    "weight_distance",
    "weight_limit",
    "FockState",
    "RExponent",
    "basis",
    "r_norm",
    "sup_norm",
    "apply_h",
    "apply_L",
    "jacobi_check",
    "mode_product",
    "omega",
    "zero_mode_matrix",
    "apply_h_bracket",
    "apply_L0_bracket",
    "apply_Lm1_bracket",
    "bracket_coeffs",
    "bracket_lift",
    "KummerChain",
    "QSeries",
    "bernoulli",
    "eisenstein",
    "eisenstein_star",
    "quasimodular_fit",
    "graded_check",
    "one_point",
    "z_function",
    "z_limit",
    "PadicTarget",
    "cauchy_verify",
    "eigen_residual",
    "resolvent_apply",
    "resolvent_norm_profile",
    "format_state",
    "parse_state",
    "BACKEND",
]
