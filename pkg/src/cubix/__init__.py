"""Exact symplectic covariants, orbit invariants and factorization of binary cubics."""

from .cubics import (
    BinaryCubic, LinearForm, Matrix2, TracelessMatrix,
    act_algebra, act_group, b_mu, j_involution, moment, omega, psi, qn,
)
from .errors import CubixError
from .factor import cardano_root, full_factor, is_reducible, linear_factor
from .fields import parse_field
from .orbits import (
    classify, gl_invariant, invariant, orbit_compose, same_gl2_orbit, same_sl2_orbit,
)
from .verify import census, verify_suite

__version__ = "0.1.0"

__all__ = [
    "BinaryCubic", "LinearForm", "Matrix2", "TracelessMatrix",
    "act_algebra", "act_group", "b_mu", "j_involution", "moment", "omega", "psi", "qn",
    "CubixError", "cardano_root", "full_factor", "is_reducible", "linear_factor",
    "parse_field", "classify", "gl_invariant", "invariant", "orbit_compose",
    "same_gl2_orbit", "same_sl2_orbit", "census", "verify_suite",
]
