"""Community detection driven by the Szegedy quantum walk.

Pipeline: build the directed-edge walk on a simple graph, time-average the
edge probabilities until they settle, then grow communities from
high-degree seeds using path weights over that distribution.
"""

from .community import (
    CommunityResult,
    DetectionConfig,
    build_community,
    coverage,
    detect_communities,
    expand_neighborhood,
    find_communities,
    path_weight,
    refine_community,
)
from .exceptions import ConvergenceError, GraphInputError, NoPathError, ParseError
from .generators import barbell, planted_partition, relaxed_caveman
from .graph import (
    DirectedEdgeSpace,
    UndirectedGraph,
    build_graph,
    directed_edge_space,
    induced_degree,
    is_connected,
    largest_connected_component,
    shortest_path_edges,
)
from .io import load_dataset, read_graph
from .walk import (
    SzegedyOperator,
    WalkOutcome,
    build_szegedy_operator,
    default_backend,
    edge_probabilities,
    initial_state_max_degree,
    initial_state_uniform,
    limiting_distribution,
    run_walk,
    step,
    transition_probabilities,
)

__version__ = "0.1.0"
