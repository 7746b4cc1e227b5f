"""Compact routing laboratory: graphs, landmark routing schemes and their evaluation."""
from __future__ import annotations

__version__ = "0.1.0"

from .graph import (
    BfsTree,
    Graph,
    GraphError,
    GraphStats,
    bfs,
    degree_ccdf,
    fit_loglog_slope,
    from_edges,
    giant_component,
    stats,
)
from .hierarchical import Partition, build_hier, build_hierarchical, partition_bfs, route_hier
from .kernels import BACKEND
from .schemes import (
    LandmarkSet,
    NodeLabel,
    PacketHeader,
    RoutingLoopError,
    RoutingTable,
    SchemeArtifacts,
    build_cowen,
    build_landmark_scheme,
    build_trivial,
    build_tz,
    forward,
    route,
    select_landmarks,
    table_stats,
)
from .topology import AsRelRecord, GenConfig, asrel_to_graph, gen_powerlaw_config, gen_preferential, parse_asrel
from .evaluation import compare, evaluate, measure_stretch, neighbor_reinsertion, sweep
