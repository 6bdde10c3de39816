"""T-convex valued-field checks in the field of real Puiseux series.

Exact arithmetic on truncated Puiseux series with rational (or real
quadratic) coefficients, the RV sort, one-variable cells and normal forms,
the Jacobian property, t-stratification and tangent-cone checks, and their
archimedean counterparts (Whitney conditions on real semialgebraic sets).
"""
from __future__ import annotations

from .archimedean import (RealStratification, archimedean_tstrat_check, exponential_demo,
                          star_lift, theorem_main4_suite, whitney_check, whitney_suite)
from .cells import (BallDecomposition, Cell1, NormalForm1, ball_decomposition_with_centres,
                    cell_decompose_1var, monotone_decomposition, normal_form_1var)
from .cones import induced_cone_partition, tangent_cone_hypersurface, tangent_cone_membership
from .errors import (DomainError, ParseError, SamplingExhausted, TconvexError, TruncationError,
                     UnsupportedExtension, UnsupportedFormula)
from .formula import (DefinablePiece, Partition, PolyExpr, gradient, membership, parse_formula,
                      parse_poly)
from .formula import evaluate as eval_poly
from .jacobian import jp_check, jp_partition_build, jp_run, jp_witness, mean_value_check
from .newton import newton_polygon_roots, real_roots
from .report import Report, RunConfig
from .rv import Ball, RvElement, res, rv_fiber, rv_mul, rvo, rvo_n, vrv
from .sampling import sample_piece
from .series import (INF, PuiseuxSeries, add, compare, inv, mul, neg, parse_series, truncate,
                     val, working_precision)
from .rv import val_tuple
from .tstrat import (TStratCandidate, affine_direction, candidate, exhibition_find, graph_fit,
                     rainbow_code, risometry_check, straightening_check, tstrat_verify)

__version__ = "0.1.0"

__all__ = [
    "PuiseuxSeries", "INF", "parse_series", "add", "mul", "neg", "inv", "val", "val_tuple",
    "compare", "truncate", "working_precision",
    "RvElement", "Ball", "rvo", "rv_mul", "vrv", "rvo_n", "res", "rv_fiber",
    "PolyExpr", "DefinablePiece", "Partition", "parse_formula", "parse_poly", "eval_poly",
    "gradient", "membership", "sample_piece",
    "newton_polygon_roots", "real_roots", "Cell1", "NormalForm1", "BallDecomposition",
    "monotone_decomposition", "cell_decompose_1var", "normal_form_1var",
    "ball_decomposition_with_centres",
    "mean_value_check", "jp_partition_build", "jp_witness", "jp_check", "jp_run",
    "risometry_check", "rainbow_code", "affine_direction", "exhibition_find", "graph_fit",
    "straightening_check", "tstrat_verify", "TStratCandidate", "candidate",
    "tangent_cone_hypersurface", "tangent_cone_membership", "induced_cone_partition",
    "star_lift", "RealStratification", "archimedean_tstrat_check", "whitney_check",
    "whitney_suite", "theorem_main4_suite", "exponential_demo",
    "Report", "RunConfig",
    "TconvexError", "TruncationError", "ParseError", "DomainError", "SamplingExhausted",
    "UnsupportedExtension", "UnsupportedFormula",
]
