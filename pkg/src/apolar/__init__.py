"""Exact-arithmetic orthogonal polynomials from apolarity of binary forms."""
from .ring import Poly, VarId, Kind, x, y, det, vandermonde, dehomogenize
from .umbral import (
    MomentFunctional,
    MomentTable,
    apply_E,
    apply_E0,
    apply_E_tilde,
    builtin_moments,
    load_moments,
    product_table,
)
from .covariants import (
    BinaryForm,
    BracketProduct,
    FormAssignment,
    LinearChange,
    apolar_pairing,
    apolar_space_dim,
    covariant_J,
    covariant_J_det,
    form_from_moments,
    hessian,
    transform_form,
    transvectant,
    umbral_U,
)
from .ops import check_orthogonality, gops_det, gops_symbolic, gops_table, leading_coefficient
from .quadrature import QuadratureRule, discriminant_moment, gauss_rule, sylvester_decompose
from .symfun import p_alpha_k, s_alpha_k, schur, monomial_sym, verify_schur_monomial_identities
from .multivar import (
    MultiForm,
    box_enumerate,
    multi_apolar_space_dim,
    multi_gops_det,
    multi_gops_symbolic,
    multi_ops_full,
)

__version__ = "0.1.0"
