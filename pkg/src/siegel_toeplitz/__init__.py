"""Spectral matrix functions of Toeplitz operators with nilpotent symbols on
poly-Bergman-type spaces of the two-dimensional Siegel domain."""

from .algebra import (
    EigencurveTable,
    MembershipReport,
    PureState,
    approx_identity_limit,
    eigencurves,
    eigendecompose_spd,
    fiber_vector_test,
    generalized_eigen_check,
    hermite_frame_det,
    membership_frakC,
    membership_T,
    pure_state_eval,
    separation_exponent,
)
from .errors import DomainError, IntegrationError, NonMemberError, UnsupportedClassError
from .specfun import (
    QuadratureRule,
    TailMomentMatrix,
    adaptive_integrate,
    build_quadrature,
    gaussian_tail_moment_matrix,
    hermite_coeff_matrix,
    hermite_vector,
    laguerre_vector,
    oracle_integrate,
    tail_moments,
)
from .spectral import (
    CompactPoint,
    SpectralMatrix,
    gamma_a_matrix,
    gamma_a_scalar,
    gamma_b,
    gamma_b_boundary,
    gamma_c,
    phi_a,
    phi_inverse,
    phi_map,
    phi_plus,
)
from .symbols import Symbol1D, Symbol2D, SymbolHalfLine, catalog, parse_symbol, pc_decompose

__version__ = "0.1.0"
