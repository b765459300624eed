"""
无向图、归一化算子与图 Rayleigh 商 | Undirected graphs, normalized operators and the graph Rayleigh quotient
"""

from relaxuni.graph.graph import (
    FeatureMatrix,
    Graph,
    complete_graph,
    cycle_graph,
    gcn_adjacency,
    grid_graph,
    laplacian,
    normalized_adjacency,
    random_connected_graph,
    star_graph,
)
from relaxuni.graph.io import GraphDocument, graph_from_json, graph_to_json, load_graph, save_graph
from relaxuni.graph.rayleigh import rayleigh_quotient, rayleigh_quotient_dense, rayleigh_quotient_edge_form

__all__ = [
    "FeatureMatrix",
    "Graph",
    "GraphDocument",
    "complete_graph",
    "cycle_graph",
    "gcn_adjacency",
    "graph_from_json",
    "graph_to_json",
    "grid_graph",
    "laplacian",
    "load_graph",
    "normalized_adjacency",
    "random_connected_graph",
    "rayleigh_quotient",
    "rayleigh_quotient_dense",
    "rayleigh_quotient_edge_form",
    "save_graph",
    "star_graph",
]
