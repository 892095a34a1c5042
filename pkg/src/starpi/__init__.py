"""Exact computations with polynomial identities of algebras with involution."""

from .analysis import (DESK_UT_SPECS, CodimTable, Target, ThresholdReport, WedderburnData, capelli_combination_check,
                       codim_table, exponent_identities, star_exponent_simple, star_exponent_structural,
                       star_exponent_ut, verify_capelli_thresholds, verify_direct_sum_bounds,
                       verify_simple_nonidentity, wedderburn_from_spec, wedderburn_ut)
from .evaluate import (Assignment, CodimReport, CostGuardExceeded, KindViolation, codimension, codimension_sequence,
                       eval_poly, evaluation_matrix, find_nonvanishing, is_star_identity, search_nonvanishing)
from .freealg import (GEN, SKEW, SYM, MLPoly, ParseError, Var, VarKind, capelli, capelli_deleted_set,
                      capelli_generators, capelli_star, monomial, parse_poly, pn_star_dim, render, star,
                      substitute, type_vectors)
from .linalg import (QQ, GF, Matrix, PrimeField, RationalField, RegimeError, Subspace, left_kernel, nullspace, rank,
                     row_space, subspace_contains, subspace_equal, subspace_intersect, subspace_sum)
from .staralg import (AlgebraError, Component, StarAlgebra, UTSpec, UTStar, direct_sum, from_spec, load_spec,
                      mk_exchange, mk_symplectic, mk_transpose, mk_UT_star, mk_UT_star_full, tensor_nilpotent,
                      zero_algebra)
from .tideal import (ConsequenceSpace, TStarGens, compare_with_algebra, consequences, gamma_gens, ideal_codimension,
                     spanning_vanish)

__version__ = "0.1.0"
