"""Linear kernel for feedback vertex set on planar multigraphs."""

from .engine import KernelizeOutcome, classify_terminal, kernelize, kernelize_budgets
from .multigraph import GraphError, Instance, MultiGraph
from .oracle import decision, min_fvs
from .rules import RuleId, RuleMatch

__all__ = [
    "GraphError",
    "Instance",
    "KernelizeOutcome",
    "MultiGraph",
    "RuleId",
    "RuleMatch",
    "classify_terminal",
    "decision",
    "kernelize",
    "kernelize_budgets",
    "min_fvs",
]
