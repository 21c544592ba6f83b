"""Roots in Q_p of sparse integer polynomials.

Binomials and trinomials are solved exactly, with certified approximate
roots; the bounds and tetra modules hold the separation estimates.
"""

from .arith import INFINITE, PadicContext, ord_p
from .hensel import ApproxRoot, Frame, certify_approximate_root, lift_to_precision, root_trace
from .oracle import BudgetExceeded, count_qp_roots_oracle, exhaustive_roots_mod
from .poly import SparsePoly, parse
from .polygon import lower_hull
from .solvers import (
    PrecisionNotCertified,
    PrecisionPolicy,
    SolveReport,
    Unsupported,
    count_binomial_roots,
    solve,
)
from .tree import build_tree

__all__ = [
    "INFINITE",
    "PadicContext",
    "ord_p",
    "ApproxRoot",
    "Frame",
    "certify_approximate_root",
    "lift_to_precision",
    "root_trace",
    "BudgetExceeded",
    "count_qp_roots_oracle",
    "exhaustive_roots_mod",
    "SparsePoly",
    "parse",
    "lower_hull",
    "PrecisionNotCertified",
    "PrecisionPolicy",
    "SolveReport",
    "Unsupported",
    "count_binomial_roots",
    "solve",
    "build_tree",
]
