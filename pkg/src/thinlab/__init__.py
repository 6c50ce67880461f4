"""Exact thinness of trees: solver, consistent-layout builder and oracles."""

from .bounds import BoundReport, almost_leaves_solution, check_bounds
from .caps import CapExceeded, Caps, load_caps
from .certify import (
    Violation,
    check_consistent,
    min_classes_for_order,
    thinness_by_characterization,
    thinness_by_order_enumeration,
)
from .layout import ConsistentSolution, consistent_solution
from .thinness_engine import NIL, SubtreeInfo, compute_lists, compute_thinness, thinness
from .tree_core import (
    ParseError,
    RootedTree,
    Tree,
    TreeError,
    dangling,
    diameter,
    enumerate_labeled_trees,
    gen_complete_mary,
    gen_random_tree,
    gen_smallest_tree,
    parse_edge_list,
    root_at,
)

__all__ = [
    "NIL",
    "BoundReport",
    "CapExceeded",
    "Caps",
    "ConsistentSolution",
    "ParseError",
    "RootedTree",
    "SubtreeInfo",
    "Tree",
    "TreeError",
    "Violation",
    "almost_leaves_solution",
    "check_bounds",
    "check_consistent",
    "compute_lists",
    "compute_thinness",
    "consistent_solution",
    "dangling",
    "diameter",
    "enumerate_labeled_trees",
    "gen_complete_mary",
    "gen_random_tree",
    "gen_smallest_tree",
    "load_caps",
    "min_classes_for_order",
    "parse_edge_list",
    "root_at",
    "thinness",
    "thinness_by_characterization",
    "thinness_by_order_enumeration",
]
