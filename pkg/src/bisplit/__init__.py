"""Exact solvers for bicluster editing with vertex splitting."""
from .core import (
    LEFT,
    RIGHT,
    ApplyError,
    BipartiteGraph,
    CisClass,
    CisPartition,
    DeleteEdge,
    InsertEdge,
    QuotientGraph,
    Split,
    Variant,
    Vertex,
    L,
    R,
    apply,
    check_solution,
    critical_independent_sets,
    is_bicluster,
    quotient_graph,
    verify_solution,
)
from .kernel import KernelResult, KernelStats, Verdict, kernelize
from .solver import Assignment, CostBreakdown, SolveResult, assignment_cost, enumerate_candidates, solve

__version__ = "0.1.0"
