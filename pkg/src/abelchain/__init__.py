"""Exact and numerical tools for the Riccati and Abel hierarchies."""

from .dynamics import (
    DarbouxPair,
    VectorField,
    build_gamma,
    chain_polynomials,
    check_darboux,
    divergence,
    solve_multiplier_exponents,
    time_dependent_darboux,
    verify_multiplier,
)
from .hierarchy import OperatorKind, force, hierarchy_member, superposition_equation
from .integrals import RationalSurface, independence_rank, j_integrals, j_matrix, t_sequence
from .numerics import DriftReport, IntegratorConfig, Method, Trajectory, drift_report, integrate
from .polycore import JetPolynomial, X, parse_polynomial, render
from .powerexpr import INDETERMINATE, PowerExpression

__version__ = "0.1.0"

__all__ = [
    "DarbouxPair",
    "DriftReport",
    "INDETERMINATE",
    "IntegratorConfig",
    "JetPolynomial",
    "Method",
    "OperatorKind",
    "PowerExpression",
    "RationalSurface",
    "Trajectory",
    "VectorField",
    "X",
    "build_gamma",
    "chain_polynomials",
    "check_darboux",
    "divergence",
    "drift_report",
    "force",
    "hierarchy_member",
    "independence_rank",
    "integrate",
    "j_integrals",
    "j_matrix",
    "parse_polynomial",
    "render",
    "solve_multiplier_exponents",
    "superposition_equation",
    "t_sequence",
    "time_dependent_darboux",
    "verify_multiplier",
]
