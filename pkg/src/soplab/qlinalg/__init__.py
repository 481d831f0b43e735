"""Exact rational linear algebra: vectors, polyhedral (semi)norms, LP."""

from .lp import LPProblem, LPSolution, LPStatus, LPStructureError, check_certificate, lp_min_decomposition, solve_lp
from .norms import (
    B0Seminorm,
    MaxAbsNorm,
    PolyhedralNorm,
    fgamma_basis,
    fgamma_eval,
    gamma_breakpoints,
    polyhedral_norm_eval,
    seminorm_b0,
    seminorm_b0_sweep,
)
from .vectors import (
    ZERO,
    rank,
    BasisIndex,
    DomainError,
    FSVector,
    UnsupportedBasisError,
    a,
    as_rational,
    b,
    e,
    rational_str,
)
