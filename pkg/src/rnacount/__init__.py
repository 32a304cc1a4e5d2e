"""
rnacount - exact enumeration of RNA secondary structures and plane trees.

Closed-form counts by partial stacks, helices and loops, the
Schmitt-Waterman and Chen bijections to plane trees, the forest
decomposition of labelled trees, and brute-force enumerators that check
all of them.

Example usage:
    >>> import rnacount
    >>>
    >>> rnacount.narayana(3, 4)
    175
    >>> rnacount.count_by_num_helices(2, 3, 3)
    9
    >>>
    >>> s = rnacount.parse_dot_bracket("((...))")
    >>> rnacount.compute_stats(s).helix_sizes
    (3,)
    >>> str(rnacount.chen_forward(rnacount.parse_dot_bracket("(.)")))
    '()()'
"""

from rnacount.structure import (
    LoopKind,
    SecondaryStructure,
    StructureError,
    StructureStats,
    classify_loops,
    compute_stats,
    enumerate_structures,
    loop_degrees,
    parse_dot_bracket,
    to_dot_bracket,
)
from rnacount.tree import (
    LEAF,
    PlaneTree,
    TreeError,
    TreeStats,
    eblocks,
    enumerate_plane_trees,
    parse_tree,
    serialize_tree,
    tree_of,
    tree_stats,
)
from rnacount.bijection import (
    BijectionError,
    chen_forward,
    chen_inverse,
    composite_tree_map,
    composite_tree_map_inverse,
    sw_forward,
    sw_inverse,
)
from rnacount.forest import (
    ForestError,
    ForestProfile,
    Label,
    LabelClass,
    LabelledTree,
    SmallForest,
    SmallTree,
    check_a_star,
    check_b_star,
    check_c_star,
    check_d_star,
    check_labels,
    enumerate_labelled_trees,
    forest_decode,
    forest_encode,
    forest_profile,
)
from rnacount.series import (
    BivariateSeries,
    SeriesError,
    TreeSystem,
    lagrange_coeff,
    max_both_system,
    max_loop_system,
    max_stack_system,
    partial_stack_system,
    solve_fixed_point,
)
from rnacount.counting import (
    CountingError,
    CountingResult,
    HelixDistribution,
    LoopDistribution,
    UnsupportedParameterError,
    binomial,
    count_by_helix_distribution,
    count_by_loop_distribution,
    count_by_num_helices,
    count_by_partial_stacks,
    count_joint,
    count_joint_marginal,
    count_max_both,
    count_max_loop_size,
    count_max_partial_stack,
    expected_helices,
    expected_partial_stacks,
    helix_distribution_probability,
    helix_distributions,
    helix_table,
    loop_distributions,
    mean_helix_size,
    mean_partial_stack_length,
    narayana,
    narayana_sum_identity_check,
    parse_distribution,
)
from rnacount.verify import SuiteReport, VerifyError, run_suites

__all__ = [
    # structures
    "LoopKind",
    "SecondaryStructure",
    "StructureError",
    "StructureStats",
    "classify_loops",
    "compute_stats",
    "enumerate_structures",
    "loop_degrees",
    "parse_dot_bracket",
    "to_dot_bracket",
    # plane trees
    "LEAF",
    "PlaneTree",
    "TreeError",
    "TreeStats",
    "eblocks",
    "enumerate_plane_trees",
    "parse_tree",
    "serialize_tree",
    "tree_of",
    "tree_stats",
    # bijections
    "BijectionError",
    "chen_forward",
    "chen_inverse",
    "composite_tree_map",
    "composite_tree_map_inverse",
    "sw_forward",
    "sw_inverse",
    # forests
    "ForestError",
    "ForestProfile",
    "Label",
    "LabelClass",
    "LabelledTree",
    "SmallForest",
    "SmallTree",
    "check_a_star",
    "check_b_star",
    "check_c_star",
    "check_d_star",
    "check_labels",
    "enumerate_labelled_trees",
    "forest_decode",
    "forest_encode",
    "forest_profile",
    # series
    "BivariateSeries",
    "SeriesError",
    "TreeSystem",
    "lagrange_coeff",
    "max_both_system",
    "max_loop_system",
    "max_stack_system",
    "partial_stack_system",
    "solve_fixed_point",
    # counting
    "CountingError",
    "CountingResult",
    "HelixDistribution",
    "LoopDistribution",
    "UnsupportedParameterError",
    "binomial",
    "count_by_helix_distribution",
    "count_by_loop_distribution",
    "count_by_num_helices",
    "count_by_partial_stacks",
    "count_joint",
    "count_joint_marginal",
    "count_max_both",
    "count_max_loop_size",
    "count_max_partial_stack",
    "expected_helices",
    "expected_partial_stacks",
    "helix_distribution_probability",
    "helix_distributions",
    "helix_table",
    "loop_distributions",
    "mean_helix_size",
    "mean_partial_stack_length",
    "narayana",
    "narayana_sum_identity_check",
    "parse_distribution",
    # verification
    "SuiteReport",
    "VerifyError",
    "run_suites",
]

__version__ = "0.1.0"
