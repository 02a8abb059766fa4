"""Oscillatory integrals: quadrature, stationary phase, the Voronoi transform and the H integrals."""
from .hintegral import FlatHParams, HEvaluator, HParams, H_integral, j_values
from .quadrature import FilonGrid, PhaseSpec, QuadratureResult, integrate_osc
from .stationary import (derivative_test_bound, find_stationary_point, stationary_phase_main,
                         v_stationary, y_stationary_newton, y_stationary_series)
from .voronoi import LanglandsParams, MellinContour, PsiWeight, gamma_factor, psi_phase_law, psi_transform
from .windows import Bump, GaussianWindow

__all__ = [
    "Bump", "FilonGrid", "FlatHParams", "GaussianWindow", "HEvaluator", "HParams", "H_integral",
    "LanglandsParams", "MellinContour", "PhaseSpec", "PsiWeight", "QuadratureResult",
    "derivative_test_bound", "find_stationary_point", "gamma_factor", "integrate_osc", "j_values",
    "psi_phase_law", "psi_transform", "stationary_phase_main", "v_stationary",
    "y_stationary_newton", "y_stationary_series",
]
