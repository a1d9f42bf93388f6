"""Infinity Laplacian eigenfunctions on 2-D domains.

Monotone wide-stencil finite-difference schemes for the ground state,
higher (sign-changing) eigenfunctions, and infinity-harmonic fields,
solved with a damped fixed-point iteration.
"""

from .continuum import (
    SecondOrderJet,
    eval_F_lambda,
    eval_H_lambda,
    infinity_laplacian,
)
from .distance import (
    EigenvalueEstimate,
    distance_transform,
    high_ridge,
    lambda1,
    lambda2_two_ball,
)
from .geometry import DomainSpec, contains
from .grid import Grid, build_grid, grid_errors, set_pinned
from .schemes import SchemeSpec, f1_minus, f1_plus, f2_oberman, residual
from .solver import (
    InitSpec,
    SolveReport,
    SolverConfig,
    default_tol,
    euler_step,
    initialize,
    normalize_parts,
    pin_ground_state_ridge,
    ridge_pins,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "DomainSpec", "contains",
    "Grid", "build_grid", "set_pinned", "grid_errors",
    "EigenvalueEstimate", "distance_transform", "lambda1", "high_ridge",
    "lambda2_two_ball",
    "SecondOrderJet", "infinity_laplacian", "eval_F_lambda", "eval_H_lambda",
    "SchemeSpec", "f1_plus", "f1_minus", "f2_oberman", "residual",
    "InitSpec", "SolverConfig", "SolveReport", "euler_step",
    "normalize_parts", "initialize", "solve", "default_tol",
    "ridge_pins", "pin_ground_state_ridge",
]
