"""Weighted sparse recovery with sparse binary expander matrices."""

from . import analysis, decode, experiments, graphs, simplex, weights
from ._kernels import backend_name, set_backend
from .analysis import (Certificate, ErrorConstants, RnspConstants, certify,
                       check_collision_bound, check_rnsp_sampled,
                       error_constants, expansion_failure_estimate,
                       recovery_error_bound, rnsp_constants)
from .decode import DecodeProblem, DecodeResult, build_lp, decode as decode_problem
from .errors import (BudgetError, CertificationError, DimensionError,
                     DomainError, ExpWl1Error)
from .graphs import (EdgeSet, ExpansionReport, SparseBinaryMatrix,
                     collision_set, edge_count_between, expansion_coefficient,
                     generate, neighbors)
from .graphs import apply as apply_matrix
from .simplex import LinearProgram, LpSolution, solve_lp
from .weights import (ParameterRecommendation, WeightVector, WeightedSignal,
                      best_weighted_s_term, best_weighted_s_term_exact,
                      make_weights, polynomial_budget_bound,
                      recommend_parameters, weighted_cardinality, weighted_l0,
                      weighted_norm)

__version__ = "0.1.0"
