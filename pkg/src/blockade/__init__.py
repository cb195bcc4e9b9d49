"""Exact solvers for blocker and interdiction problems on graphs."""

from .graphs import (
    Arc,
    BipartiteGraph,
    Digraph,
    GraphError,
    UndirectedGraph,
    connected_components,
    coreness,
    greedy_coloring,
    neighborhood_of_set,
    parse_dimacs,
    write_dimacs,
)
from .flows import FlowResult, max_flow_min_cut, shortest_path_avoiding
from .matching import has_complete_matching, maximum_matching
from .cliques import clique_number, max_weight_clique
from .instances import (
    BcmbpInstance,
    CipInstance,
    GosdcInstance,
    KCutInstance,
    MbcmbpInstance,
    MfbpInstance,
    MfipInstance,
    MvvspInstance,
)
from .oracles import (
    OracleBudget,
    OracleBudgetError,
    oracle_bcmbp,
    oracle_cip,
    oracle_gosdc,
    oracle_max_clique,
    oracle_mbcmbp,
    oracle_mfbp,
    oracle_mfip,
    oracle_mvvsp,
    oracle_vkcut,
)

__version__ = "0.1.0"
