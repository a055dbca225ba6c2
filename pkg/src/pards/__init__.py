"""Exact branch-and-bound solver for minimum dominating sets and two-part cover instances."""

from .config import Config
from .graph import BipartiteInstance, ContractError, Graph, build_instance
from .solver import SearchStats, SolveResult, Status, solve_mds, solve_pds, verify_solution

__all__ = [
    "BipartiteInstance",
    "Config",
    "ContractError",
    "Graph",
    "SearchStats",
    "SolveResult",
    "Status",
    "build_instance",
    "solve_mds",
    "solve_pds",
    "verify_solution",
]
__version__ = "0.1.0"
