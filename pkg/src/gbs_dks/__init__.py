"""Hafnian-proportional subgraph sampling and stochastic densest-k-subgraph solvers."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    EmptyDistributionError,
    GraphParseError,
    InputError,
)
from .graph import (
    Graph,
    all_subset_edge_counts,
    complete_graph,
    erdos_renyi,
    from_edges,
    induced_edge_count,
    planted_instance,
    read_graph,
    read_subset,
    write_graph,
    write_subset,
)
from .hafnian import (
    double_factorial,
    hafnian_fast,
    hafnian_pairings,
    min_edges_for_pm,
    pm_upper_bound,
    subgraph_matching_counts,
)
from .optimize import (
    AnnealParams,
    RunTrace,
    accept_proposal,
    charikar_greedy,
    exhaustive_best,
    random_search,
    simulated_annealing,
)
from .sampler import (
    MisParams,
    WeightTable,
    build_weight_table,
    drop_min_degree_vertex,
    gbs_explore,
    gbs_explore_odd,
    gbs_tweak,
    get_weight_table,
    load_weight_table,
    make_explorer,
    make_tweaker,
    max_scaling,
    mis_sample,
    sample_indices,
    save_weight_table,
    spectral_radius,
    uniform_explore,
    uniform_tweak,
)

__all__ = [
    "AnnealParams",
    "BudgetExceededError",
    "EmptyDistributionError",
    "Graph",
    "GraphParseError",
    "InputError",
    "MisParams",
    "RunTrace",
    "WeightTable",
    "accept_proposal",
    "all_subset_edge_counts",
    "build_weight_table",
    "charikar_greedy",
    "complete_graph",
    "double_factorial",
    "drop_min_degree_vertex",
    "erdos_renyi",
    "exhaustive_best",
    "from_edges",
    "gbs_explore",
    "gbs_explore_odd",
    "gbs_tweak",
    "get_weight_table",
    "hafnian_fast",
    "hafnian_pairings",
    "induced_edge_count",
    "load_weight_table",
    "make_explorer",
    "make_tweaker",
    "max_scaling",
    "min_edges_for_pm",
    "mis_sample",
    "planted_instance",
    "pm_upper_bound",
    "random_search",
    "read_graph",
    "read_subset",
    "sample_indices",
    "save_weight_table",
    "simulated_annealing",
    "spectral_radius",
    "subgraph_matching_counts",
    "uniform_explore",
    "uniform_tweak",
    "write_graph",
    "write_subset",
]
