"""General factors of bipartite graphs, parameterized by the size of one side."""

from .instance import (
    U,
    V,
    Decision,
    Instance,
    StructuralError,
    lift_unweighted,
    make_instance,
    normalize,
    parse_instance,
    serialize_instance,
    verify_factor,
)
from .fpt import SolveStats, solve, solve_singleton_ones
from .forest import solve_forest
from .oracle import BudgetExceeded, enumerate_all_factors, solve_bruteforce
from .transforms import PreconditionError

__all__ = [
    "U",
    "V",
    "BudgetExceeded",
    "Decision",
    "Instance",
    "PreconditionError",
    "SolveStats",
    "StructuralError",
    "enumerate_all_factors",
    "lift_unweighted",
    "make_instance",
    "normalize",
    "parse_instance",
    "serialize_instance",
    "solve",
    "solve_bruteforce",
    "solve_forest",
    "solve_singleton_ones",
    "verify_factor",
]
