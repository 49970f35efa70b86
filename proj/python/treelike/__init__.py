"""Decide whether a vertex-label map and an edge-label map on leaf pairs come
from one labeled rooted tree, and build the least-resolved such tree."""

from ._treelike import (
    CombinedTree,
    Delta,
    Epsilon,
    Error,
    InputError,
    SplitMix64,
    decide,
    explain,
    fitch_violation,
    format_instance,
    is_fitch_map,
    is_m_empty_tree_like,
    is_symbolic_ultrametric,
    is_type_C_fitch,
    least_resolved,
    parse_instance,
    random_scenario,
    ultrametric_violation,
)

__all__ = [
    "CombinedTree",
    "Delta",
    "Epsilon",
    "Error",
    "InputError",
    "SplitMix64",
    "decide",
    "explain",
    "fitch_violation",
    "format_instance",
    "is_fitch_map",
    "is_m_empty_tree_like",
    "is_symbolic_ultrametric",
    "is_type_C_fitch",
    "least_resolved",
    "parse_instance",
    "random_scenario",
    "ultrametric_violation",
]
