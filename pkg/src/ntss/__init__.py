"""Exact tools for non-monotone target sets with thresholds in {0, 1, deg}."""

from .brute import cross_validate, min_target_bruteforce
from .conditions import classify, decide_target_set_fast, extract_conditions, satisfies
from .decomposition import TreeDecomposition, heuristic_td, make_nice, parse_td
from .dp import solve
from .hardness import generate, parse_dimacs
from .instance import Graph, Instance, parse_instance, serialize_instance
from .kernel import kernelize
from .simulate import is_target_set, run, step

__all__ = [
    "Graph",
    "Instance",
    "TreeDecomposition",
    "classify",
    "cross_validate",
    "decide_target_set_fast",
    "extract_conditions",
    "generate",
    "heuristic_td",
    "is_target_set",
    "kernelize",
    "make_nice",
    "min_target_bruteforce",
    "parse_dimacs",
    "parse_instance",
    "parse_td",
    "run",
    "satisfies",
    "serialize_instance",
    "solve",
    "step",
]
