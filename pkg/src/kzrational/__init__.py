"""Exact rational fundamental solutions of the Knizhnik-Zamolodchikov
system for the natural representation of S_n at rho = +-1."""

from .builder import (
    FundamentalSolution,
    PartialFractionSolution,
    build_fundamental,
    build_y1,
    build_yj,
    build_yn,
    rho_plus_fundamental,
)
from .linalg import Matrix, determinant, inverse, solve_singular, vandermonde_residues
from .model import KZSystem, a_matrix, p_k, parse_system, perm_matrix, spectral_data, t_matrix
from .rational_core import Polynomial, RationalFunction
from .verifier import (
    consistency_relations,
    rationality_gate,
    verify_duality,
    verify_ode,
)

__version__ = "0.1.0"
