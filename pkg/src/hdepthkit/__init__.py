"""Exact Hilbert depth of squarefree monomial ideals and their quotients."""

from .combinatorics import (BinomialExpansion, binom, fvector_feasible, kk_expand, kk_upper,
                            magic_identity_rhs, shadow_lower_bound)
from .errors import DomainError, ParseError
from .hdepth import (AlphaVector, BetaTable, HdepthReport, alpha_from_beta, alpha_of_ideal,
                     alpha_of_quotient, beta_ideal_from_quotient, beta_table, compare_criteria,
                     hdepth, hdepth_general, principal_profile)
from .ideals import Monomial, MonomialIdeal, ideal_sum, intersect, minimalize, parse_ideal, polarize

__version__ = "0.1.0"
