"""Exact synthesis and verification of first integrals of multinomial ODE systems."""

from .arrays import (IntegralArray, build_links, build_matrix, canonical_form, classify_normal,
                     parse_array, search, synthesize, validate)
from .exact import RatMatrix, inner_product, null_space, rref, solve
from .families import (ExtensionParams, LogFamilyParams, PlanarTheta, extend_case1, extend_case2,
                       log_family, planar_algebraic, planar_branch, planar_log)
from .lie import (AlgebraicIntegral, CollectedDerivative, LogIntegralA, LogIntegralB, collect,
                  log_monomial_derivative, monomial_derivative, parse_integral, verify,
                  verify_algebraic, verify_logA, verify_logB)
from .monomial import monomial_integral_basis, separation_check
from .numeric import drift, rhs_eval, rk4
from .system import (MultinomialSystem, ScalarODE, check_exponent_independence, parse_scalar_ode,
                     parse_system, reduce_scalar_ode, sigma_alpha)

__version__ = "0.1.0"
