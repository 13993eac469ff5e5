"""DoF regions of the three-receiver MIMO broadcast channel with receiver
message side information, plus constructive precoders to check them."""

from .si_graph import (CATALOG, IsoClass, SideInfoGraph, acyclic_vertex_subsets,
                       all_labeled_graphs, build_graph, canonicalize, decode_order,
                       strip_non_cycle_arcs)
from .dof_region import (AntennaConfig, LinearConstraint, Region, contains,
                         enumerate_vertices, equals, fractional_vertices,
                         index_coding_region, is_subset, lemma1_region, scale,
                         theorem1_region)

__all__ = [
    "CATALOG", "IsoClass", "SideInfoGraph", "acyclic_vertex_subsets", "all_labeled_graphs",
    "build_graph", "canonicalize", "decode_order", "strip_non_cycle_arcs",
    "AntennaConfig", "LinearConstraint", "Region", "contains", "enumerate_vertices",
    "equals", "fractional_vertices", "index_coding_region", "is_subset", "lemma1_region",
    "scale", "theorem1_region",
]
