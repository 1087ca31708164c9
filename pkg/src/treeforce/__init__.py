"""Oriented trees in digraphs of large minimum out-degree.

Generators for the extremal families, tree structure analysis, embedders
that return checkable certificates, and an experiment harness.
"""

from .digraph import (
    BudgetExceeded,
    Digraph,
    GraphError,
    ParseError,
    PreconditionError,
    count_two_paths,
    format_edge_list,
    in_neighbors,
    induced_subgraph,
    is_oriented,
    min_out_degree,
    out_neighbors,
    parse_edge_list,
    prune_to_exact_outdegree,
    to_dot,
)
from .embedders import (
    NEVER_PROPERTY,
    TRIVIAL_PROPERTY,
    CommonProperty,
    SpiderCertificate,
    TreeEmbedding,
    branching_with_property,
    brute_force_embed,
    brute_spider_oracle,
    find_spider2,
    find_t_tree,
    gamma_levels,
    greedy_extend,
    greedy_out_arborescence,
    instar_oracle,
    naive_embed,
    spider2_search,
    validate_embedding,
)
from .generators import (
    complete_digraph,
    level_digraph,
    out_branching,
    random_min_outdegree,
    regular_tournament,
    spider,
    t_tree,
)
from .trees import (
    OrientedTree,
    classify,
    embed_into_Tkl,
    height_function,
    hub_set,
    is_antidirected,
    is_grounded,
    is_out_arborescence,
    minimal_subtree_containing,
    prune_in_leaves,
)

__version__ = "0.1.0"
